#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "sdpi/distributions.hpp"

namespace sdpi {

/// Auxiliary U with U - X - Y Markov, written as P(U=u) = w_u and
/// P(X=x | U=u) = r_u(x).
struct UDecomposition {
  Pmf weights;
  std::vector<Pmf> conditionals;

  /// Checks |U| >= 2, sizes, and sum_u w_u r_u = p(x) within `tol`.
  void validate(const JointDistribution& j, double tol = 1e-10) const;
};

struct UStats {
  double i_uy = 0.0;
  double i_ux = 0.0;
  double ratio = 0.0;  // base free
};

struct SStarOptions {
  int restarts = 64;
  /// Points per simplex dimension for the dense scan (used when |X| <= 3).
  int grid_n = 512;
  /// Relative-improvement stopping threshold for the ascent.
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int max_iter = 2000;
};

struct SStarResult {
  double value = 0.0;
  /// Best r found. Equals p(x) when the supremum is the limit r -> p(x).
  Pmf maximizer = Pmf::uniform(1);
  /// The value is the local limit rho_m^2 approached as r -> p(x).
  bool attained_in_limit = false;
  /// Best ratio found by the vertex/grid/ascent search alone.
  double search_value = 0.0;
  /// D(maximizer || p(x)) in nats (0 when attained in the limit).
  double denominator = 0.0;
  int restarts_used = 0;
};

/// Points with D(r || p) below this (nats) are excluded from the search.
inline constexpr double kExcludedNeighborhood = 1e-9;

/// D(r(y) || p(y)) / D(r(x) || p(x)). Throws RTooCloseToP when the
/// denominator is below 1e-12 nats.
double kl_ratio(const JointDistribution& j, const Pmf& r, LogBase base = LogBase::Bits);

/// s*(X;Y) = sup_{r != p} D(r(y) || p(y)) / D(r(x) || p(x)).
SStarResult sstar(const JointDistribution& j, const SStarOptions& opts = {});

/// I(U;Y) and I(U;X) from the mixture form and, independently, from the
/// explicit (U,X) and (U,Y) tables; the two routes must agree to 1e-10.
/// Throws ZeroIUX.
UStats ratio_for_u(const JointDistribution& j, const UDecomposition& u,
                   LogBase base = LogBase::Bits);

/// Binary U with P(U=1|X=0) = a and P(U=1|X=1) = b. Throws NotBinaryInput.
UDecomposition binary_u_from_conditionals(const JointDistribution& j, double a, double b);

/// P(U=1 | X=x) for each x; inverse of binary_u_from_conditionals.
Eigen::VectorXd u_given_x(const JointDistribution& j, const UDecomposition& u, Index u_index = 1);

/// Two-point U with w = (eps, 1 - eps), r_1 = r_star, r_2 = (p - eps r_star)/(1 - eps).
/// Throws EpsTooLarge, RTooCloseToP.
std::vector<UStats> perturbation_sequence(const JointDistribution& j, const Pmf& r_star,
                                          const std::vector<double>& eps_list,
                                          LogBase base = LogBase::Bits);

}  // namespace sdpi
