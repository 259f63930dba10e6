#include "sdpi/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace sdpi {

namespace {

/// Orthonormal basis (columns) of the complement of the unit vector `u`,
/// taken from a Householder reflection that maps e_0 onto u.
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& u) {
  const Index n = u.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return full.rightCols(n - 1);
}

struct TopEigen {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Largest eigenpair of a small symmetric PSD matrix. Power iteration first;
/// falls back to a dense solve when the spectral gap is too small for it to
/// settle within the iteration budget.
TopEigen top_eigenpair(const Eigen::MatrixXd& m) {
  const Index n = m.rows();
  TopEigen out;
  if (n == 0) return out;
  if (n == 1) {
    out.value = std::max(0.0, m(0, 0));
    out.vector = Eigen::VectorXd::Ones(1);
    return out;
  }

  constexpr int kMaxIter = 2000;
  constexpr double kTol = 1e-12;
  const double scale = std::max(m.norm(), 1e-300);

  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0).normalized();
  double lambda = v.dot(m * v);
  bool converged = false;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd w = m * v;
    const double nw = w.norm();
    if (nw <= 1e-300 * scale) {
      // v is (numerically) in the null space; the matrix may be zero.
      break;
    }
    w /= nw;
    const double next = w.dot(m * w);
    const double residual = (m * w - next * w).norm();
    v = std::move(w);
    const double change = std::abs(next - lambda);
    lambda = next;
    if (change <= kTol * std::max(1.0, lambda) && residual <= 1e-9 * scale) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    out.value = std::max(0.0, es.eigenvalues()(n - 1));
    out.vector = es.eigenvectors().col(n - 1);
    return out;
  }
  out.value = std::max(0.0, lambda);
  out.vector = v;
  return out;
}

}  // namespace

QMatrix q_matrix(const JointDistribution& j) {
  auto [px, py] = marginals(j);
  Eigen::MatrixXd q = px.probs().cwiseSqrt().cwiseInverse().asDiagonal() * j.pxy() *
                      py.probs().cwiseSqrt().cwiseInverse().asDiagonal();
  return QMatrix{std::move(q), std::move(px), std::move(py)};
}

CorrelationWitness maximal_correlation(const JointDistribution& j) {
  CorrelationWitness out;
  if (j.size_x() == 1 || j.size_y() == 1) {
    out.f = Eigen::VectorXd::Zero(j.size_x());
    out.g = Eigen::VectorXd::Zero(j.size_y());
    return out;
  }

  const QMatrix q = q_matrix(j);
  const Eigen::VectorXd sx = q.sqrt_px();
  const Eigen::VectorXd sy = q.sqrt_py();

  // Remove the known top pair, then work inside the orthogonal complements so
  // the returned singular vectors are exactly orthogonal to it.
  const Eigen::MatrixXd deflated = q.entries - sx * sy.transpose();
  const Eigen::MatrixXd bx = complement_basis(sx);
  const Eigen::MatrixXd by = complement_basis(sy);
  const Eigen::MatrixXd reduced = bx.transpose() * deflated * by;

  const TopEigen top = top_eigenpair(reduced * reduced.transpose());
  const double sigma = std::sqrt(top.value);

  Eigen::VectorXd u = bx * top.vector;
  Eigen::VectorXd v;
  if (sigma > 1e-14) {
    v = by * (reduced.transpose() * top.vector);
    v /= v.norm();
  } else {
    v = by.col(0);
  }

  out.rho = std::min(1.0, sigma);
  out.f = u.cwiseQuotient(sx);
  out.g = v.cwiseQuotient(sy);
  const double corr = (out.f.transpose() * j.pxy() * out.g).value();
  if (corr < 0.0) out.g = -out.g;
  return out;
}

double binary_rho_squared(const JointDistribution& j) {
  if (std::min(j.size_x(), j.size_y()) != 2) {
    throw Error(ErrorCode::NotBinary, "neither X nor Y is binary");
  }
  const Eigen::VectorXd px = j.px();
  const Eigen::VectorXd py = j.py();
  double acc = 0.0;
  for (Index x = 0; x < j.size_x(); ++x) {
    for (Index y = 0; y < j.size_y(); ++y) {
      const double v = j.pxy()(x, y);
      acc += v * v / (px(x) * py(y));
    }
  }
  return acc - 1.0;
}

double renyi_value(const JointDistribution& j, const Eigen::VectorXd& f) {
  if (f.size() != j.size_x()) throw Error(ErrorCode::ShapeMismatch, "f must be indexed by X");
  const Eigen::VectorXd px = j.px();
  const Eigen::VectorXd py = j.py();
  const double mean = px.dot(f);
  Eigen::VectorXd centered = f.array() - mean;
  const double var = px.dot(centered.cwiseAbs2());
  if (!(var > 1e-300)) throw Error(ErrorCode::ZeroFunction, "f has zero variance");
  centered /= std::sqrt(var);
  // E[f(X)|Y=y] = sum_x p(x,y) f(x) / p(y)
  const Eigen::VectorXd cond = (j.pxy().transpose() * centered).cwiseQuotient(py);
  return py.dot(cond.cwiseAbs2());
}

JointDistribution backward_coupling(const JointDistribution& j) {
  const Eigen::VectorXd py = j.py();
  Eigen::MatrixXd coupling = j.pxy() * py.cwiseInverse().asDiagonal() * j.pxy().transpose();
  coupling = 0.5 * (coupling + coupling.transpose()).eval();
  return JointDistribution::from(std::move(coupling), j.x_labels(), j.x_labels(), kInternalTolerance);
}

double hessian_rho_lambda(const JointDistribution& j) {
  if (j.size_x() == 1 || j.size_y() == 1) return 0.0;
  const QMatrix q = q_matrix(j);
  const Eigen::MatrixXd qqt = q.entries * q.entries.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qqt, Eigen::EigenvaluesOnly);
  const Index n = qqt.rows();
  return std::clamp(es.eigenvalues()(n - 2), 0.0, 1.0);
}

}  // namespace sdpi
