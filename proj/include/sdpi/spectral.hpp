#pragma once

#include <Eigen/Dense>

#include "sdpi/distributions.hpp"

namespace sdpi {

/// Q(x,y) = p(x,y) / sqrt(p(x) p(y)). Its top singular triple is
/// (1, sqrt(p(x)), sqrt(p(y))) and its second singular value is the maximal
/// correlation.
struct QMatrix {
  Eigen::MatrixXd entries;
  Pmf x_marginal;
  Pmf y_marginal;

  Eigen::VectorXd sqrt_px() const { return x_marginal.probs().cwiseSqrt(); }
  Eigen::VectorXd sqrt_py() const { return y_marginal.probs().cwiseSqrt(); }
};

/// Maximal correlation together with a pair of functions attaining it.
/// When the second singular value is repeated, any maximizing pair may be
/// returned.
struct CorrelationWitness {
  double rho = 0.0;
  Eigen::VectorXd f;  // on X, zero mean and unit variance under p(x)
  Eigen::VectorXd g;  // on Y, zero mean and unit variance under p(y)
};

QMatrix q_matrix(const JointDistribution& j);

/// rho_m(X;Y) = sigma_2(Q). For |X| = 1 or |Y| = 1 the value is 0 and the
/// returned f, g are identically zero.
CorrelationWitness maximal_correlation(const JointDistribution& j);

/// sum p(x,y)^2 / (p(x) p(y)) - 1, valid when X or Y is binary. Throws NotBinary.
double binary_rho_squared(const JointDistribution& j);

/// E[ E[f(X)|Y]^2 ] after centering and scaling f to unit variance.
/// Throws ZeroFunction when f is constant on the support of p(x).
double renyi_value(const JointDistribution& j, const Eigen::VectorXd& f);

/// Law of (X, X') with X - Y - X' Markov and (X', Y) distributed as (X, Y).
JointDistribution backward_coupling(const JointDistribution& j);

/// Smallest lambda for which t_lambda has a PSD Hessian at p(x): the second
/// largest eigenvalue of Q Q^T from a full symmetric eigensolve.
double hessian_rho_lambda(const JointDistribution& j);

}  // namespace sdpi
