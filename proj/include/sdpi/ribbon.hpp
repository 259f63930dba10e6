#pragma once

#include <cstdint>
#include <vector>

#include "sdpi/distributions.hpp"

namespace sdpi {

/// A point of the hypercontractive branch 1 <= q <= p.
struct RibbonQuery {
  double p = 1.0;
  double q = 1.0;

  /// Throws BadOrder unless 1 <= q <= p.
  void validate() const;
};

struct GapOptions {
  int restarts = 32;
  int max_iter = 400;
  std::uint64_t seed = 0;
};

/// Sampled boundary q*(p) with chordal slopes (q* - 1)/(p - 1).
struct QStarCurve {
  std::vector<double> ps;
  std::vector<double> qstars;
  std::vector<double> slopes;
};

inline constexpr double kDefaultQTolerance = 1e-4;
/// in_ribbon treats a best gap at or below this as "inequality holds".
inline constexpr double kGapTolerance = 1e-12;

/// Best found value of sup_{g >= 0, ||g||_q = 1} ||E[g(Y)|X]||_p - 1.
/// The search is multistart and so returns a lower bound on the supremum;
/// 0 is always attained by constant g. Throws BadOrder.
double contraction_gap(const JointDistribution& j, double p, double q, const GapOptions& opts = {});

bool in_ribbon(const JointDistribution& j, double p, double q, double tol = kGapTolerance,
               const GapOptions& opts = {});

/// inf{q : ||E[g(Y)|X]||_p <= ||g(Y)||_q for all g}, by bisection on [1, p]
/// to absolute tolerance `tol`.
double q_star(const JointDistribution& j, double p, double tol = kDefaultQTolerance,
              const GapOptions& opts = {});

/// (q*(p) - 1)/(p - 1), accurate to `tol` in the slope.
double chordal_slope(const JointDistribution& j, double p, double tol = kDefaultQTolerance,
                     const GapOptions& opts = {});

/// chordal_slope at p = 1 + eps; tends to s*(Y;X) as eps -> 0.
double slope_at_one(const JointDistribution& j, double eps, double tol = kDefaultQTolerance,
                    const GapOptions& opts = {});

/// Hoelder conjugate p/(p - 1). Throws PEqualsOne.
double conjugate(double p);

QStarCurve q_star_curve(const JointDistribution& j, const std::vector<double>& ps,
                        double tol = kDefaultQTolerance, const GapOptions& opts = {});

}  // namespace sdpi
