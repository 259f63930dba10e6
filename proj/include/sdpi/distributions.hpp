#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sdpi/error.hpp"

namespace sdpi {

using Labels = std::vector<std::string>;
using Index = Eigen::Index;

enum class LogBase { Bits, Nats };

/// Tolerance on |sum - 1| for user supplied tables.
inline constexpr double kIngestTolerance = 1e-9;
/// Tolerance on |sum - 1| for objects built by the library itself.
inline constexpr double kInternalTolerance = 1e-12;

/// Divide a quantity measured in nats by this to express it in `base`.
template <typename Scalar = double>
Scalar nats_per_unit(LogBase base) {
  return base == LogBase::Bits ? std::log(Scalar(2)) : Scalar(1);
}

/// "0", "1", ..., "n-1".
Labels index_labels(Index n);

// ---------------------------------------------------------------------------
// Expression-level measures. These accept any dense Eigen expression and never
// validate normalization; the typed overloads further down do.
// All use the conventions 0 log 0 = 0 and 0 log(0/0) = 0.
// ---------------------------------------------------------------------------

template <typename Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& p, LogBase base = LogBase::Bits) {
  using Scalar = typename Derived::Scalar;
  Scalar acc(0);
  for (Index i = 0; i < p.size(); ++i) {
    const Scalar v = p.derived().coeff(i);
    if (v > Scalar(0)) acc -= v * std::log(v);
  }
  return acc / nats_per_unit<Scalar>(base);
}

/// D(r || p). Throws SupportViolation when r puts mass where p has none.
template <typename DerivedR, typename DerivedP>
typename DerivedR::Scalar kl_divergence(const Eigen::MatrixBase<DerivedR>& r,
                                        const Eigen::MatrixBase<DerivedP>& p,
                                        LogBase base = LogBase::Bits) {
  using Scalar = typename DerivedR::Scalar;
  if (r.size() != p.size()) throw Error(ErrorCode::ShapeMismatch, "kl_divergence: size mismatch");
  // Summed as r log(r/p) - r + p, whose terms are all nonnegative, so r close
  // to p does not cancel into roundoff.
  Scalar acc(0);
  for (Index i = 0; i < r.size(); ++i) {
    const Scalar ri = r.derived().coeff(i);
    const Scalar pi = p.derived().coeff(i);
    if (ri <= Scalar(0)) {
      acc += pi;
      continue;
    }
    if (pi <= Scalar(0)) throw Error(ErrorCode::SupportViolation, "r_i > 0 where p_i = 0");
    const Scalar u = (ri - pi) / pi;
    const Scalar log_ratio = std::abs(u) < Scalar(0.5) ? std::log1p(u) : std::log(ri / pi);
    const Scalar term = ri * log_ratio - (ri - pi);
    acc += term > Scalar(0) ? term : Scalar(0);
  }
  return acc / nats_per_unit<Scalar>(base);
}

/// I(X;Y) of a nonnegative table. Zero rows or columns are allowed.
template <typename Derived>
typename Derived::Scalar mutual_information(const Eigen::MatrixBase<Derived>& table,
                                            LogBase base = LogBase::Bits) {
  using Scalar = typename Derived::Scalar;
  const auto row = table.rowwise().sum().eval();
  const auto col = table.colwise().sum().eval();
  Scalar acc(0);
  for (Index x = 0; x < table.rows(); ++x) {
    for (Index y = 0; y < table.cols(); ++y) {
      const Scalar v = table.derived().coeff(x, y);
      if (v > Scalar(0)) acc += v * std::log(v / (row(x) * col(y)));
    }
  }
  if (acc < Scalar(0)) acc = Scalar(0);
  return acc / nats_per_unit<Scalar>(base);
}

/// Generalized norm (sum_i w_i |v_i|^p)^(1/p), with the geometric mean at p = 0
/// and 0 whenever p <= 0 and some |v_i| = 0 carries positive weight.
/// Large |p| is evaluated on max-rescaled values so it does not overflow.
template <typename DerivedV, typename DerivedW>
typename DerivedV::Scalar lp_norm(const Eigen::MatrixBase<DerivedV>& values,
                                  const Eigen::MatrixBase<DerivedW>& weights,
                                  typename DerivedV::Scalar p) {
  using Scalar = typename DerivedV::Scalar;
  if (values.size() != weights.size()) throw Error(ErrorCode::ShapeMismatch, "lp_norm: size mismatch");
  Scalar m(0);
  bool zero_with_mass = false;
  for (Index i = 0; i < values.size(); ++i) {
    if (weights.derived().coeff(i) <= Scalar(0)) continue;
    const Scalar a = std::abs(values.derived().coeff(i));
    if (a == Scalar(0)) zero_with_mass = true;
    m = std::max(m, a);
  }
  if (m == Scalar(0)) return Scalar(0);
  if (p <= Scalar(0) && zero_with_mass) return Scalar(0);
  if (p == Scalar(0)) {
    Scalar acc(0);
    for (Index i = 0; i < values.size(); ++i) {
      const Scalar w = weights.derived().coeff(i);
      if (w > Scalar(0)) acc += w * std::log(std::abs(values.derived().coeff(i)));
    }
    return std::exp(acc);
  }
  Scalar acc(0);
  for (Index i = 0; i < values.size(); ++i) {
    const Scalar w = weights.derived().coeff(i);
    if (w > Scalar(0)) acc += w * std::pow(std::abs(values.derived().coeff(i)) / m, p);
  }
  return m * std::pow(acc, Scalar(1) / p);
}

// ---------------------------------------------------------------------------
// Validated types
// ---------------------------------------------------------------------------

/// Probability vector on a finite labeled alphabet.
class Pmf {
 public:
  /// Validates entries and sum, then renormalizes. Throws NegativeEntry or SumNotOne.
  static Pmf from(Labels labels, Eigen::VectorXd probs, double tol = kIngestTolerance);
  static Pmf from(Eigen::VectorXd probs, double tol = kIngestTolerance);
  static Pmf uniform(Index n);
  static Pmf point_mass(Index n, Index at);

  const Labels& labels() const noexcept { return labels_; }
  const Eigen::VectorXd& probs() const noexcept { return probs_; }
  Index size() const noexcept { return probs_.size(); }
  double operator[](Index i) const { return probs_(i); }

  bool strictly_positive() const { return (probs_.array() > 0.0).all(); }

 private:
  Pmf(Labels labels, Eigen::VectorXd probs) : labels_(std::move(labels)), probs_(std::move(probs)) {}

  Labels labels_;
  Eigen::VectorXd probs_;
};

/// Joint law of (X, Y) on finite alphabets with strictly positive marginals.
class JointDistribution {
 public:
  /// Throws NegativeEntry, SumNotOne, ZeroMarginal, ShapeMismatch.
  static JointDistribution from(Eigen::MatrixXd pxy, Labels x_labels, Labels y_labels,
                                double tol = kIngestTolerance);
  static JointDistribution from(Eigen::MatrixXd pxy, double tol = kIngestTolerance);

  const Labels& x_labels() const noexcept { return x_labels_; }
  const Labels& y_labels() const noexcept { return y_labels_; }
  const Eigen::MatrixXd& pxy() const noexcept { return pxy_; }
  Index size_x() const noexcept { return pxy_.rows(); }
  Index size_y() const noexcept { return pxy_.cols(); }

  Eigen::VectorXd px() const { return pxy_.rowwise().sum(); }
  Eigen::VectorXd py() const { return pxy_.colwise().sum().transpose(); }

  /// The law of (Y, X).
  JointDistribution transposed() const;

 private:
  JointDistribution(Eigen::MatrixXd pxy, Labels x, Labels y)
      : x_labels_(std::move(x)), y_labels_(std::move(y)), pxy_(std::move(pxy)) {}

  Labels x_labels_;
  Labels y_labels_;
  Eigen::MatrixXd pxy_;
};

/// Row-stochastic p(y|x) together with a strictly positive reference input.
class Channel {
 public:
  static Channel from(Eigen::MatrixXd pyx, Pmf input, Labels y_labels,
                      double tol = kIngestTolerance);
  static Channel from(Eigen::MatrixXd pyx, Pmf input, double tol = kIngestTolerance);

  const Labels& x_labels() const noexcept { return input_.labels(); }
  const Labels& y_labels() const noexcept { return y_labels_; }
  const Eigen::MatrixXd& pyx() const noexcept { return pyx_; }
  const Pmf& input() const noexcept { return input_; }
  Index size_x() const noexcept { return pyx_.rows(); }
  Index size_y() const noexcept { return pyx_.cols(); }

  /// Same rows, different reference input.
  Channel with_input(const Pmf& input) const;

 private:
  Channel(Eigen::MatrixXd pyx, Pmf input, Labels y)
      : y_labels_(std::move(y)), pyx_(std::move(pyx)), input_(std::move(input)) {}

  Labels y_labels_;
  Eigen::MatrixXd pyx_;
  Pmf input_;
};

JointDistribution joint_from_matrix(const Eigen::MatrixXd& table, const Labels& x_labels,
                                    const Labels& y_labels);

std::pair<Pmf, Pmf> marginals(const JointDistribution& j);

Channel channel_of(const JointDistribution& j);

/// p(x) p(y|x) for the channel's own reference input.
JointDistribution joint_of(const Channel& c);

/// r(y) = sum_x r(x) p(y|x). Throws LabelMismatch.
Pmf push_forward(const Channel& c, const Pmf& r);

double entropy(const Pmf& p, LogBase base = LogBase::Bits);

/// Throws LabelMismatch or SupportViolation.
double kl_divergence(const Pmf& r, const Pmf& p, LogBase base = LogBase::Bits);

double mutual_information(const JointDistribution& j, LogBase base = LogBase::Bits);

/// Independent product; labels are "(a,b)" pairs with the first factor major.
JointDistribution product(const JointDistribution& j1, const JointDistribution& j2);

double lp_norm(const Eigen::VectorXd& values, const Pmf& weights, double p);

/// out[x] = sum_y p(y|x) g(y).
Eigen::VectorXd conditional_expectation(const JointDistribution& j, const Eigen::VectorXd& g);

}  // namespace sdpi
