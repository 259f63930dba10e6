#pragma once

#include <Eigen/Dense>

#include "sdpi/distributions.hpp"

namespace sdpi {

inline constexpr int kDefaultEnvelopeGrid = 1 << 12;
inline constexpr double kDefaultTouchTolerance = 1e-9;
inline constexpr double kDefaultLambdaTolerance = 1e-5;

/// One evaluation of t_lambda(r) = H(Y_r) - lambda H(r).
struct TCurveSample {
  Pmf r;
  double value = 0.0;
};

/// t_lambda sampled on a uniform grid of P(X=0) together with its lower convex
/// envelope on the same grid.
struct Envelope1D {
  Eigen::VectorXd grid;
  Eigen::VectorXd curve;
  Eigen::VectorXd hull;

  /// Index of the grid point closest to `p0`.
  Index nearest(double p0) const;
  double gap_at(double p0) const {
    const Index i = nearest(p0);
    return curve(i) - hull(i);
  }
};

/// Throws LambdaOutOfRange, LabelMismatch.
double t_lambda(const Channel& c, const Pmf& r, double lambda, LogBase base = LogBase::Bits);

TCurveSample sample_t_lambda(const Channel& c, const Pmf& r, double lambda,
                             LogBase base = LogBase::Bits);

/// Hessian of t_lambda (in nats) at an interior r, expressed in the tangent
/// basis {e_i - e_last : i < |X|-1} of the simplex. Throws BoundaryPoint.
Eigen::MatrixXd hessian_t_lambda(const Channel& c, const Pmf& r, double lambda);

/// d^2/de^2 t_lambda(p (1 + e f)) at e = 0, in nats, where p is the channel's
/// reference input and f has zero mean under p:
///   -E[ E[f(X)|Y]^2 ] + lambda E[f^2].
double t_lambda_second_derivative(const Channel& c, const Eigen::VectorXd& f, double lambda);

/// Smallest eigenvalue of a symmetric matrix is >= -tol.
bool is_psd(const Eigen::MatrixXd& m, double tol = 1e-12);

/// Curve and lower convex hull on grid_n + 1 equispaced values of P(X=0),
/// endpoints included. Throws NotBinaryInput; grid_n must be >= 64.
Envelope1D lower_envelope_1d(const Channel& c, double lambda, int grid_n = kDefaultEnvelopeGrid,
                             LogBase base = LogBase::Bits);

/// Whether t_lambda meets its lower convex envelope (within `tol` bits) at the
/// grid point nearest the channel's reference input.
bool touches_envelope(const Channel& c, double lambda, double tol = kDefaultTouchTolerance,
                      int grid_n = kDefaultEnvelopeGrid);

/// Minimum lambda at which t_lambda touches its envelope at the reference
/// input, by bisection on [0, 1]. Touching is monotone in lambda.
double lambda_dagger(const Channel& c, double tol = kDefaultLambdaTolerance,
                     int grid_n = kDefaultEnvelopeGrid, double touch_tol = kDefaultTouchTolerance);

struct InputScan {
  double max_rho_squared = 0.0;
  double max_sstar = 0.0;
  double argmax_rho_squared = 0.0;  // P(X=0)
  double argmax_sstar = 0.0;        // P(X=0)
};

/// Maximizes rho_m^2 and s* over binary inputs P(X=0) = k / grid_n,
/// k = 1 .. grid_n - 1, for fixed channel rows. Throws NotBinaryInput.
InputScan scan_inputs(const Eigen::MatrixXd& channel_rows, int grid_n = 200);

}  // namespace sdpi
