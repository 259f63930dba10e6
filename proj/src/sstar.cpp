#include "sdpi/sstar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "sdpi/spectral.hpp"

namespace sdpi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogFloor = 1e-300;

/// Euclidean projection onto the probability simplex (sort-and-threshold).
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index i = 0; i < n; ++i) {
    cumsum += u[static_cast<std::size_t>(i)];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  Eigen::VectorXd out = (v.array() - theta).max(0.0).matrix();
  const double s = out.sum();
  return out / s;
}

/// r -> D(rW || py) / D(r || px), all in nats.
class RatioObjective {
 public:
  RatioObjective(const Eigen::MatrixXd& rows, Eigen::VectorXd px, Eigen::VectorXd py)
      : rows_(rows), px_(std::move(px)), py_(std::move(py)) {}

  /// kNegInf inside the excluded neighborhood of p(x).
  double operator()(const Eigen::VectorXd& r, double* denominator = nullptr) const {
    const double d = kl_divergence(r, px_, LogBase::Nats);
    if (denominator) *denominator = d;
    if (!(d >= kExcludedNeighborhood)) return kNegInf;
    const Eigen::VectorXd ry = rows_.transpose() * r;
    return kl_divergence(ry, py_, LogBase::Nats) / d;
  }

  /// Gradient in ambient coordinates. Zero coordinates use a floored log so
  /// the components stay finite and carry the sign of the one-sided slope.
  Eigen::VectorXd gradient(const Eigen::VectorXd& r, double value) const {
    const Index n = r.size();
    const Eigen::VectorXd ry = rows_.transpose() * r;
    const double d = kl_divergence(r, px_, LogBase::Nats);
    Eigen::VectorXd log_ratio_y(ry.size());
    for (Index y = 0; y < ry.size(); ++y) log_ratio_y(y) = std::log(std::max(ry(y), kLogFloor) / py_(y)) + 1.0;
    Eigen::VectorXd grad_num = rows_ * log_ratio_y;
    Eigen::VectorXd grad(n);
    for (Index i = 0; i < n; ++i) {
      const double grad_den = std::log(std::max(r(i), kLogFloor) / px_(i)) + 1.0;
      grad(i) = (grad_num(i) - value * grad_den) / d;
    }
    return grad;
  }

 private:
  Eigen::MatrixXd rows_;
  Eigen::VectorXd px_;
  Eigen::VectorXd py_;
};

struct Candidate {
  double value = kNegInf;
  Eigen::VectorXd r;
};

void offer(Candidate& best, double value, const Eigen::VectorXd& r) {
  if (value > best.value) {
    best.value = value;
    best.r = r;
  }
}

/// Projected gradient ascent with step halving/doubling.
Candidate ascend(const RatioObjective& objective, Eigen::VectorXd r, const SStarOptions& opts) {
  double value = objective(r);
  if (value == kNegInf) return {};
  double step = 0.1;
  int small_gains = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::VectorXd grad = objective.gradient(r, value);
    grad.array() -= grad.mean();
    const double scale = grad.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !std::isfinite(scale)) break;
    grad /= scale;

    bool accepted = false;
    double gain = 0.0;
    while (step > 1e-15) {
      Eigen::VectorXd trial = project_to_simplex(r + step * grad);
      const double v = objective(trial);
      if (v > value) {
        gain = (v - value) / std::max(std::abs(value), 1e-300);
        r = std::move(trial);
        value = v;
        step = std::min(2.0 * step, 1.0);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    small_gains = gain < opts.tol ? small_gains + 1 : 0;
    if (small_gains >= 2) break;
  }
  return {value, std::move(r)};
}

Eigen::VectorXd dirichlet_one(Index n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = expo(rng);
  return v / v.sum();
}

void scan_grid(const RatioObjective& objective, Index n_x, int grid_n, std::vector<Candidate>& top,
               std::size_t keep) {
  auto consider = [&](const Eigen::VectorXd& r) {
    const double v = objective(r);
    if (v == kNegInf) return;
    if (top.size() < keep) {
      top.push_back({v, r});
    } else {
      auto worst = std::min_element(top.begin(), top.end(),
                                    [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
      if (v > worst->value) *worst = {v, r};
    }
  };
  const double n = static_cast<double>(grid_n);
  Eigen::VectorXd r(n_x);
  if (n_x == 2) {
    for (int k = 0; k <= grid_n; ++k) {
      r << k / n, (grid_n - k) / n;
      consider(r);
    }
  } else if (n_x == 3) {
    for (int a = 0; a <= grid_n; ++a) {
      for (int b = 0; a + b <= grid_n; ++b) {
        r << a / n, b / n, (grid_n - a - b) / n;
        consider(r);
      }
    }
  }
}

Pmf pmf_on(const Labels& labels, const Eigen::VectorXd& v) {
  return Pmf::from(labels, v, kInternalTolerance);
}

}  // namespace

void UDecomposition::validate(const JointDistribution& j, double tol) const {
  if (weights.size() < 2) throw Error(ErrorCode::ValidationError, "U needs at least two values");
  if (static_cast<Index>(conditionals.size()) != weights.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one conditional per value of U is required");
  }
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(j.size_x());
  for (Index u = 0; u < weights.size(); ++u) {
    const Pmf& r = conditionals[static_cast<std::size_t>(u)];
    if (r.size() != j.size_x()) throw Error(ErrorCode::LabelMismatch, "conditional is not on X");
    mix += weights[u] * r.probs();
  }
  if ((mix - j.px()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorCode::ValidationError, "sum_u w_u r_u(x) differs from p(x)");
  }
}

double kl_ratio(const JointDistribution& j, const Pmf& r, LogBase base) {
  if (r.size() != j.size_x()) throw Error(ErrorCode::LabelMismatch, "r is not on X");
  const Eigen::VectorXd px = j.px();
  const double den = kl_divergence(r.probs(), px, LogBase::Nats);
  if (!(den >= 1e-12)) throw Error(ErrorCode::RTooCloseToP, "D(r || p) < 1e-12");
  const Eigen::VectorXd ry = channel_of(j).pyx().transpose() * r.probs();
  // Same base in numerator and denominator.
  return kl_divergence(ry, j.py(), base) / kl_divergence(r.probs(), px, base);
}

SStarResult sstar(const JointDistribution& j, const SStarOptions& opts) {
  const Index n = j.size_x();
  const Channel c = channel_of(j);
  const Eigen::VectorXd px = j.px();
  const RatioObjective objective(c.pyx(), px, j.py());

  Candidate best;
  std::vector<Candidate> starts;

  for (Index i = 0; i < n; ++i) {
    Eigen::VectorXd vertex = Eigen::VectorXd::Unit(n, i);
    offer(best, objective(vertex), vertex);
    starts.push_back({kNegInf, vertex});
  }

  if (n <= 3) {
    std::vector<Candidate> top;
    scan_grid(objective, n, opts.grid_n, top, 4);
    for (auto& cand : top) {
      offer(best, cand.value, cand.r);
      starts.push_back(std::move(cand));
    }
  }

  std::mt19937_64 rng(opts.seed);
  for (int k = 0; k < opts.restarts; ++k) starts.push_back({kNegInf, dirichlet_one(n, rng)});

  int runs = 0;
  for (const auto& s : starts) {
    Candidate local = ascend(objective, s.r, opts);
    ++runs;
    offer(best, local.value, local.r);
  }

  SStarResult out;
  out.restarts_used = runs;
  out.search_value = std::max(0.0, best.value);

  // Along p(x)(1 + e f) the ratio tends to E[E[f|Y]^2]/E[f^2] as e -> 0, and
  // the best direction gives rho_m^2; the supremum is at least that limit.
  const double rho = maximal_correlation(j).rho;
  const double local_limit = rho * rho;

  if (best.value == kNegInf || local_limit > best.value) {
    out.value = std::clamp(local_limit, 0.0, 1.0);
    out.maximizer = pmf_on(j.x_labels(), px);
    out.attained_in_limit = true;
    out.denominator = 0.0;
  } else {
    out.value = std::clamp(best.value, 0.0, 1.0);
    out.maximizer = pmf_on(j.x_labels(), best.r);
    objective(best.r, &out.denominator);
  }
  return out;
}

UStats ratio_for_u(const JointDistribution& j, const UDecomposition& u, LogBase base) {
  u.validate(j);
  const Channel c = channel_of(j);
  const Eigen::VectorXd px = j.px();
  const Eigen::VectorXd py = j.py();
  const Index nu = u.weights.size();

  double mix_ux = 0.0;
  double mix_uy = 0.0;
  Eigen::MatrixXd table_ux(nu, j.size_x());
  Eigen::MatrixXd table_uy(nu, j.size_y());
  for (Index k = 0; k < nu; ++k) {
    const double w = u.weights[k];
    const Eigen::VectorXd& rx = u.conditionals[static_cast<std::size_t>(k)].probs();
    const Eigen::VectorXd ry = c.pyx().transpose() * rx;
    table_ux.row(k) = w * rx.transpose();
    table_uy.row(k) = w * ry.transpose();
    if (w > 0.0) {
      mix_ux += w * kl_divergence(rx, px, base);
      mix_uy += w * kl_divergence(ry, py, base);
    }
  }
  const double direct_ux = mutual_information(table_ux, base);
  const double direct_uy = mutual_information(table_uy, base);
  if (std::abs(direct_ux - mix_ux) > 1e-10 || std::abs(direct_uy - mix_uy) > 1e-10) {
    throw Error(ErrorCode::NumericalFailure, "mixture and direct mutual information disagree");
  }
  if (!(mix_ux > 1e-15)) throw Error(ErrorCode::ZeroIUX, "I(U;X) = 0, ratio undefined");
  return UStats{mix_uy, mix_ux, mix_uy / mix_ux};
}

UDecomposition binary_u_from_conditionals(const JointDistribution& j, double a, double b) {
  if (j.size_x() != 2) throw Error(ErrorCode::NotBinaryInput, "X must be binary");
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw Error(ErrorCode::ValidationError, "conditionals must lie in [0, 1]");
  }
  const Eigen::VectorXd px = j.px();
  const Eigen::Vector2d u1(px(0) * a, px(1) * b);
  const Eigen::Vector2d u0(px(0) * (1.0 - a), px(1) * (1.0 - b));
  const double w1 = u1.sum();
  const double w0 = u0.sum();
  // A value of U that never occurs gets p(x) as its (irrelevant) conditional.
  auto conditional = [&](const Eigen::Vector2d& mass, double w) {
    return pmf_on(j.x_labels(), w > 0.0 ? Eigen::VectorXd(mass / w) : px);
  };
  UDecomposition out{Pmf::from(Eigen::Vector2d(w0, w1), kInternalTolerance),
                     {conditional(u0, w0), conditional(u1, w1)}};
  return out;
}

Eigen::VectorXd u_given_x(const JointDistribution& j, const UDecomposition& u, Index u_index) {
  const double w = u.weights[u_index];
  return (w * u.conditionals[static_cast<std::size_t>(u_index)].probs()).cwiseQuotient(j.px());
}

std::vector<UStats> perturbation_sequence(const JointDistribution& j, const Pmf& r_star,
                                          const std::vector<double>& eps_list, LogBase base) {
  if (r_star.size() != j.size_x()) throw Error(ErrorCode::LabelMismatch, "r* is not on X");
  const Eigen::VectorXd px = j.px();
  if (!(kl_divergence(r_star.probs(), px, LogBase::Nats) >= 1e-12)) {
    throw Error(ErrorCode::RTooCloseToP, "r* coincides with p(x)");
  }
  std::vector<UStats> out;
  out.reserve(eps_list.size());
  for (const double eps : eps_list) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::EpsTooLarge, "eps must lie in (0, 1)");
    Eigen::VectorXd rest = (px - eps * r_star.probs()) / (1.0 - eps);
    if (rest.minCoeff() < -1e-15) {
      throw Error(ErrorCode::EpsTooLarge, "(p - eps r*)/(1 - eps) leaves the simplex");
    }
    rest = rest.cwiseMax(0.0);
    UDecomposition u{Pmf::from(Eigen::Vector2d(eps, 1.0 - eps), kInternalTolerance),
                     {pmf_on(j.x_labels(), r_star.probs()), pmf_on(j.x_labels(), rest)}};
    out.push_back(ratio_for_u(j, u, base));
  }
  return out;
}

}  // namespace sdpi
