#include "sdpi/ribbon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sdpi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log ||v||_p under weights w, evaluated on max-rescaled values.
double log_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& w, double p) {
  double m = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (w(i) > 0.0) m = std::max(m, v(i));
  }
  if (!(m > 0.0)) return kNegInf;
  double acc = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (w(i) > 0.0 && v(i) > 0.0) acc += w(i) * std::pow(v(i) / m, p);
  }
  return std::log(m) + std::log(acc) / p;
}

/// d/dv log ||v||_p for nonnegative v with a positive entry.
Eigen::VectorXd grad_log_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& w, double p) {
  double m = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (w(i) > 0.0) m = std::max(m, v(i));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  double acc = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (w(i) > 0.0 && v(i) > 0.0) acc += w(i) * std::pow(v(i) / m, p);
  }
  for (Index i = 0; i < v.size(); ++i) {
    if (!(w(i) > 0.0)) continue;
    const double scaled = v(i) / m;
    // std::pow(0, 0) == 1 gives the p = 1 limit.
    out(i) = w(i) * std::pow(scaled, p - 1.0) / (m * acc);
  }
  return out;
}

/// g -> log ||E[g(Y)|X]||_p - log ||g||_q; scale invariant in g.
class ContractionObjective {
 public:
  ContractionObjective(const JointDistribution& j, double p, double q)
      : rows_(channel_of(j).pyx()), px_(j.px()), py_(j.py()), p_(p), q_(q) {}

  double operator()(const Eigen::VectorXd& g) const {
    const double den = log_norm(g, py_, q_);
    if (den == kNegInf) return kNegInf;
    return log_norm(rows_ * g, px_, p_) - den;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& g) const {
    const Eigen::VectorXd h = rows_ * g;
    return rows_.transpose() * grad_log_norm(h, px_, p_) - grad_log_norm(g, py_, q_);
  }

  Index size() const { return py_.size(); }

 private:
  Eigen::MatrixXd rows_;
  Eigen::VectorXd px_;
  Eigen::VectorXd py_;
  double p_;
  double q_;
};

Eigen::VectorXd normalized(Eigen::VectorXd g) {
  const double m = g.maxCoeff();
  return m > 0.0 ? Eigen::VectorXd(g / m) : g;
}

/// Projected ascent on the nonnegative orthant, g kept at unit sup-norm.
double ascend(const ContractionObjective& objective, Eigen::VectorXd g, int max_iter) {
  g = normalized(g.cwiseMax(0.0));
  double value = objective(g);
  if (value == kNegInf) return kNegInf;
  double step = 0.25;
  int small_gains = 0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd grad = objective.gradient(g);
    const double scale = grad.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !std::isfinite(scale)) break;
    grad /= scale;
    bool accepted = false;
    double gain = 0.0;
    while (step > 1e-14) {
      Eigen::VectorXd trial = (g + step * grad).cwiseMax(0.0);
      if (trial.maxCoeff() > 0.0) {
        trial = normalized(std::move(trial));
        const double v = objective(trial);
        if (v > value) {
          gain = v - value;
          g = std::move(trial);
          value = v;
          step = std::min(2.0 * step, 1.0);
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
    small_gains = gain < 1e-15 ? small_gains + 1 : 0;
    if (small_gains >= 3) break;
  }
  return value;
}

/// g = (t, 1 - t) covers every direction of the orthant when |Y| = 2.
double scan_two_point(const ContractionObjective& objective) {
  constexpr int kPoints = 2000;
  double best = kNegInf;
  int best_k = 0;
  Eigen::VectorXd g(2);
  for (int k = 0; k <= kPoints; ++k) {
    const double t = static_cast<double>(k) / kPoints;
    g << t, 1.0 - t;
    const double v = objective(g);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  // Golden-section refinement on the bracketing cell pair.
  double lo = std::max(0.0, (best_k - 1.0) / kPoints);
  double hi = std::min(1.0, (best_k + 1.0) / kPoints);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto eval = [&](double t) {
    g << t, 1.0 - t;
    return objective(g);
  };
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  double fa = eval(a);
  double fb = eval(b);
  for (int it = 0; it < 80; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = eval(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = eval(a);
    }
  }
  return std::max({best, fa, fb});
}

}  // namespace

void RibbonQuery::validate() const {
  if (!(p >= 1.0 && q >= 1.0 && q <= p)) {
    throw Error(ErrorCode::BadOrder, "need 1 <= q <= p");
  }
}

double contraction_gap(const JointDistribution& j, double p, double q, const GapOptions& opts) {
  RibbonQuery{p, q}.validate();
  const ContractionObjective objective(j, p, q);
  const Index n = objective.size();

  double best = objective(Eigen::VectorXd::Ones(n));
  auto offer = [&](double v) {
    if (v > best) best = v;
  };

  for (Index y = 0; y < n; ++y) offer(ascend(objective, Eigen::VectorXd::Unit(n, y), opts.max_iter));

  if (n == 2) {
    offer(scan_two_point(objective));
  } else if (n <= 8) {
    // Indicators of every subset of Y as additional seeds.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Eigen::VectorXd g(n);
      for (Index y = 0; y < n; ++y) g(y) = (mask >> y) & 1u ? 1.0 : 0.0;
      offer(ascend(objective, g, opts.max_iter));
    }
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int k = 0; k < opts.restarts; ++k) {
    Eigen::VectorXd g(n);
    for (Index y = 0; y < n; ++y) g(y) = (k % 2 == 0) ? uniform(rng) : std::exp(normal(rng));
    offer(ascend(objective, g, opts.max_iter));
  }
  return std::expm1(best);
}

bool in_ribbon(const JointDistribution& j, double p, double q, double tol, const GapOptions& opts) {
  return contraction_gap(j, p, q, opts) <= tol;
}

double q_star(const JointDistribution& j, double p, double tol, const GapOptions& opts) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadOrder, "p must be at least 1");
  if (p - 1.0 <= tol) return 1.0;
  if (in_ribbon(j, p, 1.0 + tol, kGapTolerance, opts)) return 1.0;
  double lo = 1.0 + tol;  // outside
  double hi = p;          // inside by conditional Jensen
  for (int it = 0; it < 60 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (in_ribbon(j, p, mid, kGapTolerance, opts)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double chordal_slope(const JointDistribution& j, double p, double tol, const GapOptions& opts) {
  if (!(p > 1.0)) throw Error(ErrorCode::BadOrder, "chordal slope needs p > 1");
  return (q_star(j, p, tol * (p - 1.0), opts) - 1.0) / (p - 1.0);
}

double slope_at_one(const JointDistribution& j, double eps, double tol, const GapOptions& opts) {
  if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorCode::ValidationError, "eps must lie in (0, 0.5]");
  return chordal_slope(j, 1.0 + eps, tol, opts);
}

double conjugate(double p) {
  if (p == 1.0) throw Error(ErrorCode::PEqualsOne, "p = 1 has no finite conjugate");
  return p / (p - 1.0);
}

QStarCurve q_star_curve(const JointDistribution& j, const std::vector<double>& ps, double tol,
                        const GapOptions& opts) {
  QStarCurve out;
  for (const double p : ps) {
    const double q = q_star(j, p, tol, opts);
    out.ps.push_back(p);
    out.qstars.push_back(q);
    out.slopes.push_back(p > 1.0 ? (q - 1.0) / (p - 1.0) : 0.0);
  }
  return out;
}

}  // namespace sdpi
