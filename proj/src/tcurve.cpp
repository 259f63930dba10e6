#include "sdpi/tcurve.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sdpi/spectral.hpp"
#include "sdpi/sstar.hpp"

namespace sdpi {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::LambdaOutOfRange, "lambda must lie in [0, 1]");
  }
}

void require_binary_input(const Channel& c) {
  if (c.size_x() != 2) throw Error(ErrorCode::NotBinaryInput, "envelope needs |X| = 2");
}

double t_lambda_raw(const Eigen::MatrixXd& rows, const Eigen::VectorXd& r, double lambda,
                    LogBase base) {
  const Eigen::VectorXd ry = rows.transpose() * r;
  return entropy(ry, base) - lambda * entropy(r, base);
}

/// Lower convex hull of (xs, ys) (xs increasing), linearly interpolated back
/// onto every x.
Eigen::VectorXd lower_hull(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  const Index n = xs.size();
  std::vector<Index> hull;
  hull.reserve(static_cast<std::size_t>(n));
  auto cross = [&](Index o, Index a, Index b) {
    return (xs(a) - xs(o)) * (ys(b) - ys(o)) - (ys(a) - ys(o)) * (xs(b) - xs(o));
  };
  for (Index i = 0; i < n; ++i) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0) hull.pop_back();
    hull.push_back(i);
  }
  Eigen::VectorXd out(n);
  std::size_t seg = 0;
  for (Index i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() - 1 && hull[seg + 1] <= i) ++seg;
    const Index a = hull[seg];
    const Index b = hull[std::min(seg + 1, hull.size() - 1)];
    if (i == a || a == b) {
      out(i) = ys(a);
    } else if (i == b) {
      out(i) = ys(b);
    } else {
      const double t = (xs(i) - xs(a)) / (xs(b) - xs(a));
      out(i) = (1.0 - t) * ys(a) + t * ys(b);
    }
  }
  return out;
}

}  // namespace

Index Envelope1D::nearest(double p0) const {
  Index best = 0;
  double dist = std::abs(grid(0) - p0);
  for (Index i = 1; i < grid.size(); ++i) {
    const double d = std::abs(grid(i) - p0);
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  return best;
}

double t_lambda(const Channel& c, const Pmf& r, double lambda, LogBase base) {
  check_lambda(lambda);
  return entropy(push_forward(c, r), base) - lambda * entropy(r, base);
}

TCurveSample sample_t_lambda(const Channel& c, const Pmf& r, double lambda, LogBase base) {
  return TCurveSample{r, t_lambda(c, r, lambda, base)};
}

Eigen::MatrixXd hessian_t_lambda(const Channel& c, const Pmf& r, double lambda) {
  check_lambda(lambda);
  if (r.size() != c.size_x()) throw Error(ErrorCode::LabelMismatch, "r is not on the channel input");
  if (!r.strictly_positive()) throw Error(ErrorCode::BoundaryPoint, "Hessian needs an interior r");
  const Index n = r.size();
  const Eigen::MatrixXd& w = c.pyx();
  const Eigen::VectorXd ry = w.transpose() * r.probs();
  Eigen::VectorXd inv_ry = Eigen::VectorXd::Zero(ry.size());
  for (Index y = 0; y < ry.size(); ++y) {
    if (ry(y) > 0.0) inv_ry(y) = 1.0 / ry(y);
  }
  // Ambient second partials: -sum_y W_iy W_jy / r(y) + lambda delta_ij / r_i.
  const Eigen::MatrixXd ambient = -(w * inv_ry.asDiagonal() * w.transpose()) +
                                  lambda * Eigen::MatrixXd(r.probs().cwiseInverse().asDiagonal());
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n - 1);
  basis.topRows(n - 1).setIdentity();
  basis.row(n - 1).setConstant(-1.0);
  return basis.transpose() * ambient * basis;
}

double t_lambda_second_derivative(const Channel& c, const Eigen::VectorXd& f, double lambda) {
  if (f.size() != c.size_x()) throw Error(ErrorCode::ShapeMismatch, "f must be indexed by X");
  const Eigen::VectorXd& p = c.input().probs();
  const Eigen::VectorXd py = c.pyx().transpose() * p;
  const Eigen::VectorXd weighted = c.pyx().transpose() * p.cwiseProduct(f);
  double cond_sq = 0.0;
  for (Index y = 0; y < py.size(); ++y) {
    if (py(y) > 0.0) cond_sq += weighted(y) * weighted(y) / py(y);
  }
  return -cond_sq + lambda * p.dot(f.cwiseAbs2());
}

bool is_psd(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Envelope1D lower_envelope_1d(const Channel& c, double lambda, int grid_n, LogBase base) {
  check_lambda(lambda);
  require_binary_input(c);
  if (grid_n < 64) throw Error(ErrorCode::ValidationError, "grid_n must be at least 64");
  Envelope1D env;
  env.grid.resize(grid_n + 1);
  env.curve.resize(grid_n + 1);
  Eigen::Vector2d r;
  for (int k = 0; k <= grid_n; ++k) {
    const double p0 = static_cast<double>(k) / grid_n;
    r << p0, 1.0 - p0;
    env.grid(k) = p0;
    env.curve(k) = t_lambda_raw(c.pyx(), r, lambda, base);
  }
  env.hull = lower_hull(env.grid, env.curve);
  env.hull = env.hull.cwiseMin(env.curve);
  return env;
}

bool touches_envelope(const Channel& c, double lambda, double tol, int grid_n) {
  const Envelope1D env = lower_envelope_1d(c, lambda, grid_n, LogBase::Bits);
  return env.gap_at(c.input()[0]) <= tol;
}

double lambda_dagger(const Channel& c, double tol, int grid_n, double touch_tol) {
  require_binary_input(c);
  if (touches_envelope(c, 0.0, touch_tol, grid_n)) return 0.0;
  if (!touches_envelope(c, 1.0, touch_tol, grid_n)) {
    throw Error(ErrorCode::NumericalFailure, "t_1 does not touch its envelope; grid too coarse?");
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (touches_envelope(c, mid, touch_tol, grid_n)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

InputScan scan_inputs(const Eigen::MatrixXd& channel_rows, int grid_n) {
  if (channel_rows.rows() != 2) throw Error(ErrorCode::NotBinaryInput, "scan needs |X| = 2");
  if (grid_n < 2) throw Error(ErrorCode::ValidationError, "grid_n must be at least 2");

  // Outputs no row can produce carry no information; drop them so the joint
  // keeps strictly positive marginals.
  std::vector<Index> used;
  for (Index y = 0; y < channel_rows.cols(); ++y) {
    if (channel_rows.col(y).sum() > 0.0) used.push_back(y);
  }
  Eigen::MatrixXd rows(2, static_cast<Index>(used.size()));
  for (std::size_t k = 0; k < used.size(); ++k) rows.col(static_cast<Index>(k)) = channel_rows.col(used[k]);

  InputScan out;
  SStarOptions opts;
  opts.restarts = 8;
  for (int k = 1; k < grid_n; ++k) {
    const double p0 = static_cast<double>(k) / grid_n;
    const Eigen::MatrixXd table = Eigen::Vector2d(p0, 1.0 - p0).asDiagonal() * rows;
    const JointDistribution j = JointDistribution::from(table, kInternalTolerance);
    const double rho = maximal_correlation(j).rho;
    const double s = sstar(j, opts).value;
    if (rho * rho > out.max_rho_squared) {
      out.max_rho_squared = rho * rho;
      out.argmax_rho_squared = p0;
    }
    if (s > out.max_sstar) {
      out.max_sstar = s;
      out.argmax_sstar = p0;
    }
  }
  return out;
}

}  // namespace sdpi
