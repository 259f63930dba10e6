#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdpi/distributions.hpp"
#include "sdpi/ribbon.hpp"
#include "sdpi/tcurve.hpp"

namespace sdpi::cli {

/// Every command produces one of these; it echoes its inputs and settings so
/// each reported number can be recomputed.
using ReportDocument = nlohmann::json;

enum ExitCode : int { kOk = 0, kInputError = 2, kUnsupportedShape = 3, kNumericalFailure = 4 };

struct MeasureOptions {
  LogBase base = LogBase::Bits;
  std::uint64_t seed = 0;
  int restarts = 64;
};

struct CounterexampleRow {
  double a = 0.0;  // P(U=1|X=0)
  double b = 0.0;  // P(U=1|X=1)
  double i_uy = 0.0;
  double i_ux = 0.0;
  double ratio = 0.0;
};

ReportDocument cmd_info(const std::string& source);
ReportDocument cmd_measures(const std::string& source, const MeasureOptions& opts = {});

/// The eight binary auxiliaries on the asymmetric erasure example, in bits.
std::vector<CounterexampleRow> counterexample_rows();
std::string counterexample_csv(const std::vector<CounterexampleRow>& rows);

Envelope1D cmd_tcurve(const std::string& source, double lambda, int grid_n = kDefaultEnvelopeGrid);
std::string envelope_csv(const Envelope1D& env);

/// q*(p) at `steps` values of p, log-spaced in p - 1 from 0.01 to pmax - 1.
QStarCurve cmd_ribbon(const std::string& source, double pmax, int steps, double tol,
                      const GapOptions& opts = {});
std::string ribbon_csv(const QStarCurve& curve);

ReportDocument cmd_tensor(const std::string& first, const std::string& second,
                          const MeasureOptions& opts = {});

/// Maps a library error onto the process exit status.
int exit_code_for(ErrorCode code);

/// Full command-line entry point; returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdpi::cli
