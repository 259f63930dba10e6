#include "sdpi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sdpi/io.hpp"
#include "sdpi/spectral.hpp"
#include "sdpi/sstar.hpp"

namespace sdpi::cli {

namespace {

constexpr Index kMaxProductAlphabet = 64;
constexpr double kLambdaConsistency = 1e-3;

nlohmann::json vec_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json joint_json(const JointDistribution& j) { return nlohmann::json::parse(joint_to_json(j)); }

const char* base_name(LogBase base) { return base == LogBase::Bits ? "bits" : "nats"; }

SStarOptions sstar_options(const MeasureOptions& opts) {
  SStarOptions s;
  s.seed = opts.seed;
  s.restarts = opts.restarts;
  return s;
}

nlohmann::json provenance(const MeasureOptions& opts) {
  const SStarOptions s = sstar_options(opts);
  return {{"seed", s.seed},           {"restarts", s.restarts},
          {"grid_n", s.grid_n},       {"ascent_tol", s.tol},
          {"excluded_kl", kExcludedNeighborhood},
          {"base", base_name(opts.base)}};
}

struct Measures {
  double rho = 0.0;
  double sstar_xy = 0.0;
  double sstar_yx = 0.0;
  double mi = 0.0;
};

Measures compute_measures(const JointDistribution& j, const MeasureOptions& opts) {
  Measures m;
  m.rho = maximal_correlation(j).rho;
  m.sstar_xy = sstar(j, sstar_options(opts)).value;
  m.sstar_yx = sstar(j.transposed(), sstar_options(opts)).value;
  m.mi = mutual_information(j, opts.base);
  return m;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::ValidationError, "cannot write '" + path + "'");
  file << text;
}

}  // namespace

ReportDocument cmd_info(const std::string& source) {
  const JointDistribution j = load_joint(source);
  const auto [px, py] = marginals(j);
  ReportDocument doc;
  doc["input"] = {{"source", source}, {"joint", joint_json(j)}};
  doc["valid"] = true;
  doc["x_marginal"] = vec_json(px.probs());
  doc["y_marginal"] = vec_json(py.probs());
  doc["mutual_information_bits"] = mutual_information(j, LogBase::Bits);
  return doc;
}

ReportDocument cmd_measures(const std::string& source, const MeasureOptions& opts) {
  const JointDistribution j = load_joint(source);
  const Measures m = compute_measures(j, opts);
  ReportDocument doc;
  doc["input"] = {{"source", source}, {"joint", joint_json(j)}};
  doc["rho"] = m.rho;
  doc["rho_squared"] = m.rho * m.rho;
  doc["sstar_xy"] = m.sstar_xy;
  doc["sstar_yx"] = m.sstar_yx;
  doc["mutual_information"] = m.mi;
  doc["provenance"] = provenance(opts);
  if (j.size_x() == 2) {
    const double ld = lambda_dagger(channel_of(j));
    doc["lambda_dagger"] = ld;
    doc["lambda_dagger_consistent"] = std::abs(ld - m.sstar_xy) <= kLambdaConsistency;
    doc["provenance"]["envelope_grid"] = kDefaultEnvelopeGrid;
    doc["provenance"]["lambda_tol"] = kDefaultLambdaTolerance;
    doc["provenance"]["touch_tol"] = kDefaultTouchTolerance;
  }
  return doc;
}

std::vector<CounterexampleRow> counterexample_rows() {
  static constexpr double kConditionals[8][2] = {
      {0.1, 0.4},     {0.01, 0.23},     {0.001, 0.102},     {0.0001, 0.04},
      {0.00001, 0.01474}, {0.000001, 0.005232}, {0.0000001, 0.0018146}, {0.00000001, 0.00061973},
  };
  const JointDistribution j = builtin_joint("fig2");
  std::vector<CounterexampleRow> rows;
  for (const auto& ab : kConditionals) {
    const UStats s = ratio_for_u(j, binary_u_from_conditionals(j, ab[0], ab[1]), LogBase::Bits);
    rows.push_back({ab[0], ab[1], s.i_uy, s.i_ux, s.ratio});
  }
  return rows;
}

std::string counterexample_csv(const std::vector<CounterexampleRow>& rows) {
  std::ostringstream os;
  os << "p_u1_given_x0,p_u1_given_x1,i_uy,i_ux,ratio\n";
  for (const auto& r : rows) {
    os << format_sig9(r.a) << ',' << format_sig9(r.b) << ',' << format_sig9(r.i_uy) << ','
       << format_sig9(r.i_ux) << ',' << format_sig9(r.ratio) << '\n';
  }
  return os.str();
}

Envelope1D cmd_tcurve(const std::string& source, double lambda, int grid_n) {
  const JointDistribution j = load_joint(source);
  return lower_envelope_1d(channel_of(j), lambda, grid_n, LogBase::Bits);
}

std::string envelope_csv(const Envelope1D& env) {
  std::ostringstream os;
  os << "p0,t_lambda,envelope\n";
  for (Index i = 0; i < env.grid.size(); ++i) {
    os << format_sig9(env.grid(i)) << ',' << format_sig9(env.curve(i)) << ','
       << format_sig9(env.hull(i)) << '\n';
  }
  return os.str();
}

QStarCurve cmd_ribbon(const std::string& source, double pmax, int steps, double tol,
                      const GapOptions& opts) {
  if (!(pmax > 1.01 && pmax <= 128.0)) throw Error(ErrorCode::ValidationError, "pmax must lie in (1.01, 128]");
  if (steps < 1) throw Error(ErrorCode::ValidationError, "steps must be positive");
  const JointDistribution j = load_joint(source);
  std::vector<double> ps;
  const double lo = std::log(0.01);
  const double hi = std::log(pmax - 1.0);
  for (int k = 0; k < steps; ++k) {
    const double t = steps == 1 ? 1.0 : static_cast<double>(k) / (steps - 1);
    ps.push_back(1.0 + std::exp(lo + t * (hi - lo)));
  }
  ps.back() = pmax;
  QStarCurve curve;
  for (const double p : ps) {
    const double slope = chordal_slope(j, p, tol, opts);
    curve.ps.push_back(p);
    curve.qstars.push_back(1.0 + slope * (p - 1.0));
    curve.slopes.push_back(slope);
  }
  return curve;
}

std::string ribbon_csv(const QStarCurve& curve) {
  std::ostringstream os;
  os << "p,q_star,chordal_slope\n";
  for (std::size_t i = 0; i < curve.ps.size(); ++i) {
    os << format_sig9(curve.ps[i]) << ',' << format_sig9(curve.qstars[i]) << ','
       << format_sig9(curve.slopes[i]) << '\n';
  }
  return os.str();
}

ReportDocument cmd_tensor(const std::string& first, const std::string& second, const MeasureOptions& opts) {
  const JointDistribution j1 = load_joint(first);
  const JointDistribution j2 = load_joint(second);
  if (j1.size_x() * j2.size_x() > kMaxProductAlphabet || j1.size_y() * j2.size_y() > kMaxProductAlphabet) {
    throw Error(ErrorCode::ProductTooLarge, "product alphabet exceeds 64 symbols");
  }
  const JointDistribution prod = product(j1, j2);
  const SStarOptions so = sstar_options(opts);
  auto factor = [&](const JointDistribution& j) {
    return nlohmann::json{{"rho", maximal_correlation(j).rho}, {"sstar", sstar(j, so).value}};
  };
  ReportDocument doc;
  doc["input"] = {{"first", first}, {"second", second}};
  doc["first"] = factor(j1);
  doc["second"] = factor(j2);
  doc["product"] = factor(prod);
  const double rho_max = std::max(doc["first"]["rho"].get<double>(), doc["second"]["rho"].get<double>());
  const double s_max = std::max(doc["first"]["sstar"].get<double>(), doc["second"]["sstar"].get<double>());
  doc["residuals"] = {{"rho", doc["product"]["rho"].get<double>() - rho_max},
                      {"sstar", doc["product"]["sstar"].get<double>() - s_max}};
  doc["provenance"] = provenance(opts);
  return doc;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotBinary:
    case ErrorCode::NotBinaryInput:
    case ErrorCode::ProductTooLarge:
    case ErrorCode::DegenerateAlphabet:
      return kUnsupportedShape;
    case ErrorCode::NumericalFailure:
      return kNumericalFailure;
    default:
      return kInputError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal correlation, strong data processing and hypercontractivity for finite joints", "sdpi"};
  app.require_subcommand(1);

  MeasureOptions mopts;
  std::string base = "bits";

  auto* info = app.add_subcommand("info", "Validate a joint distribution and print its marginals");
  std::string info_src;
  info->add_option("file", info_src, "JSON file or built-in name")->required();

  auto* measures = app.add_subcommand("measures", "rho_m, s*(X;Y), s*(Y;X) and lambda-dagger");
  std::string measures_src;
  measures->add_option("file", measures_src, "JSON file or built-in name")->required();
  measures->add_option("--base", base, "log base for mutual information")->check(CLI::IsMember({"bits", "nats"}));
  measures->add_option("--seed", mopts.seed, "seed for the s* multistart");
  measures->add_option("--restarts", mopts.restarts, "random restarts for s*")->check(CLI::NonNegativeNumber);

  auto* counter = app.add_subcommand("counterexample", "Binary-U table for the asymmetric erasure example");
  std::string counter_out;
  counter->add_option("--out", counter_out, "also write the table as CSV");

  auto* tcurve = app.add_subcommand("tcurve", "t_lambda and its lower convex envelope as CSV");
  std::string tcurve_src;
  double lambda = 0.6;
  int grid = kDefaultEnvelopeGrid;
  std::string tcurve_out;
  tcurve->add_option("file", tcurve_src, "JSON file or built-in name")->required();
  tcurve->add_option("--lambda", lambda, "lambda in [0, 1]");
  tcurve->add_option("--grid", grid, "grid intervals on P(X=0)");
  tcurve->add_option("--out", tcurve_out, "CSV path (stdout when omitted)");

  auto* ribbon = app.add_subcommand("ribbon", "q*(p) samples of the hypercontractivity ribbon as CSV");
  std::string ribbon_src;
  double pmax = 81.0;
  int steps = 12;
  double qtol = kDefaultQTolerance;
  std::string ribbon_out;
  GapOptions gopts;
  ribbon->add_option("file", ribbon_src, "JSON file or built-in name")->required();
  ribbon->add_option("--pmax", pmax, "largest p (at most 128)");
  ribbon->add_option("--steps", steps, "number of p values");
  ribbon->add_option("--tol", qtol, "tolerance on the chordal slope");
  ribbon->add_option("--seed", gopts.seed, "seed for the inner multistart");
  ribbon->add_option("--out", ribbon_out, "CSV path (stdout when omitted)");

  auto* tensor = app.add_subcommand("tensor", "Tensorization check on an independent product");
  std::string tensor_a;
  std::string tensor_b;
  tensor->add_option("file1", tensor_a, "first factor")->required();
  tensor->add_option("file2", tensor_b, "second factor")->required();
  tensor->add_option("--seed", mopts.seed, "seed for the s* multistart");
  tensor->add_option("--restarts", mopts.restarts, "random restarts for s*")->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kInputError;
  }
  mopts.base = base == "nats" ? LogBase::Nats : LogBase::Bits;

  try {
    if (*info) {
      out << cmd_info(info_src).dump(2) << '\n';
    } else if (*measures) {
      const ReportDocument doc = cmd_measures(measures_src, mopts);
      out << doc.dump(2) << '\n';
      if (doc.contains("lambda_dagger_consistent") && !doc["lambda_dagger_consistent"].get<bool>()) {
        err << "lambda-dagger and s* disagree by more than " << kLambdaConsistency << '\n';
        return kNumericalFailure;
      }
    } else if (*counter) {
      const auto rows = counterexample_rows();
      const double rho2 = binary_rho_squared(builtin_joint("fig2"));
      out << "P(U=1|X=0)  P(U=1|X=1)  I(U;Y)        I(U;X)        I(U;Y)/I(U;X)\n";
      for (const auto& r : rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%-10.8g  %-10.8g  %-12.6g  %-12.6g  %.6f\n", r.a, r.b, r.i_uy,
                      r.i_ux, r.ratio);
        out << line;
      }
      out << "rho_m^2(X;Y) = " << format_sig9(rho2) << '\n';
      out << "first row ratio " << format_sig9(rows.front().ratio)
          << (rows.front().ratio > rho2 ? " > " : " <= ") << "rho_m^2: "
          << (rows.front().ratio > rho2 ? "I(U;Y) <= rho_m^2 I(U;X) is violated\n" : "no violation\n");
      if (!counter_out.empty()) write_output(counterexample_csv(rows), counter_out, out);
    } else if (*tcurve) {
      const JointDistribution j = load_joint(tcurve_src);
      const Envelope1D env = cmd_tcurve(tcurve_src, lambda, grid);
      write_output(envelope_csv(env), tcurve_out, out);
      if (!tcurve_out.empty()) {
        out << "gap at P(X=0)=" << format_sig9(j.px()(0)) << ": " << format_sig9(env.gap_at(j.px()(0)))
            << '\n';
      }
    } else if (*ribbon) {
      const JointDistribution j = load_joint(ribbon_src);
      const QStarCurve curve = cmd_ribbon(ribbon_src, pmax, steps, qtol, gopts);
      const double rho = maximal_correlation(j).rho;
      std::ostringstream os;
      os << ribbon_csv(curve);
      os << "# sstar_xy," << format_sig9(sstar(j).value) << '\n';
      os << "# sstar_yx," << format_sig9(sstar(j.transposed()).value) << '\n';
      os << "# rho_squared," << format_sig9(rho * rho) << '\n';
      write_output(os.str(), ribbon_out, out);
    } else if (*tensor) {
      out << cmd_tensor(tensor_a, tensor_b, mopts).dump(2) << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kOk;
}

}  // namespace sdpi::cli
