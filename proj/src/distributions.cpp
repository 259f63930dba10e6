#include "sdpi/distributions.hpp"

#include <set>

namespace sdpi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::ZeroMarginal: return "ZeroMarginal";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::DegenerateAlphabet: return "DegenerateAlphabet";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::NotBinaryInput: return "NotBinaryInput";
    case ErrorCode::RTooCloseToP: return "RTooCloseToP";
    case ErrorCode::ZeroIUX: return "ZeroIUX";
    case ErrorCode::EpsTooLarge: return "EpsTooLarge";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::PEqualsOne: return "PEqualsOne";
    case ErrorCode::ProductTooLarge: return "ProductTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

Labels index_labels(Index n) {
  Labels out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

namespace {

void check_distinct(const Labels& labels, const char* what) {
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) {
    throw Error(ErrorCode::ValidationError, std::string("duplicate ") + what + " labels");
  }
}

void check_entries(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) {
      const double v = m(i, k);
      if (!std::isfinite(v)) throw Error(ErrorCode::ValidationError, "non-finite probability");
      if (v < 0.0) {
        throw Error(ErrorCode::NegativeEntry, "entry (" + std::to_string(i) + "," +
                                                  std::to_string(k) + ") = " + std::to_string(v));
      }
    }
  }
}

void check_sum(double sum, double tol) {
  if (std::abs(sum - 1.0) > tol) {
    throw Error(ErrorCode::SumNotOne, "total mass " + std::to_string(sum));
  }
}

}  // namespace

// --- Pmf -------------------------------------------------------------------

Pmf Pmf::from(Labels labels, Eigen::VectorXd probs, double tol) {
  if (static_cast<Index>(labels.size()) != probs.size()) {
    throw Error(ErrorCode::ShapeMismatch, "label count differs from probability count");
  }
  if (probs.size() == 0) throw Error(ErrorCode::ShapeMismatch, "empty alphabet");
  check_distinct(labels, "pmf");
  check_entries(probs);
  const double sum = probs.sum();
  check_sum(sum, tol);
  probs /= sum;
  return Pmf(std::move(labels), std::move(probs));
}

Pmf Pmf::from(Eigen::VectorXd probs, double tol) {
  auto labels = index_labels(probs.size());
  return from(std::move(labels), std::move(probs), tol);
}

Pmf Pmf::uniform(Index n) {
  return Pmf(index_labels(n), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

Pmf Pmf::point_mass(Index n, Index at) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(at) = 1.0;
  return Pmf(index_labels(n), std::move(v));
}

// --- JointDistribution -------------------------------------------------------

JointDistribution JointDistribution::from(Eigen::MatrixXd pxy, Labels x_labels, Labels y_labels,
                                          double tol) {
  if (static_cast<Index>(x_labels.size()) != pxy.rows() ||
      static_cast<Index>(y_labels.size()) != pxy.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "label counts differ from table shape");
  }
  if (pxy.size() == 0) throw Error(ErrorCode::ShapeMismatch, "empty table");
  check_distinct(x_labels, "x");
  check_distinct(y_labels, "y");
  check_entries(pxy);
  const double sum = pxy.sum();
  check_sum(sum, tol);
  pxy /= sum;
  for (Index x = 0; x < pxy.rows(); ++x) {
    if (!(pxy.row(x).sum() > 0.0)) {
      throw Error(ErrorCode::ZeroMarginal, "P(X=" + x_labels[static_cast<std::size_t>(x)] + ") = 0");
    }
  }
  for (Index y = 0; y < pxy.cols(); ++y) {
    if (!(pxy.col(y).sum() > 0.0)) {
      throw Error(ErrorCode::ZeroMarginal, "P(Y=" + y_labels[static_cast<std::size_t>(y)] + ") = 0");
    }
  }
  return JointDistribution(std::move(pxy), std::move(x_labels), std::move(y_labels));
}

JointDistribution JointDistribution::from(Eigen::MatrixXd pxy, double tol) {
  auto xl = index_labels(pxy.rows());
  auto yl = index_labels(pxy.cols());
  return from(std::move(pxy), std::move(xl), std::move(yl), tol);
}

JointDistribution JointDistribution::transposed() const {
  return JointDistribution(pxy_.transpose(), y_labels_, x_labels_);
}

// --- Channel -----------------------------------------------------------------

Channel Channel::from(Eigen::MatrixXd pyx, Pmf input, Labels y_labels, double tol) {
  if (pyx.rows() != input.size() || static_cast<Index>(y_labels.size()) != pyx.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "channel shape differs from labels");
  }
  check_distinct(y_labels, "y");
  check_entries(pyx);
  for (Index x = 0; x < pyx.rows(); ++x) {
    const double s = pyx.row(x).sum();
    check_sum(s, tol);
    pyx.row(x) /= s;
  }
  if (!input.strictly_positive()) {
    throw Error(ErrorCode::ZeroMarginal, "channel reference input must be strictly positive");
  }
  return Channel(std::move(pyx), std::move(input), std::move(y_labels));
}

Channel Channel::from(Eigen::MatrixXd pyx, Pmf input, double tol) {
  auto yl = index_labels(pyx.cols());
  return from(std::move(pyx), std::move(input), std::move(yl), tol);
}

Channel Channel::with_input(const Pmf& input) const {
  if (input.size() != size_x()) throw Error(ErrorCode::LabelMismatch, "input size differs from channel");
  if (!input.strictly_positive()) {
    throw Error(ErrorCode::ZeroMarginal, "channel reference input must be strictly positive");
  }
  return Channel(pyx_, input, y_labels_);
}

// --- operations ----------------------------------------------------------------

JointDistribution joint_from_matrix(const Eigen::MatrixXd& table, const Labels& x_labels,
                                    const Labels& y_labels) {
  return JointDistribution::from(table, x_labels, y_labels, kIngestTolerance);
}

std::pair<Pmf, Pmf> marginals(const JointDistribution& j) {
  return {Pmf::from(j.x_labels(), j.px(), kInternalTolerance),
          Pmf::from(j.y_labels(), j.py(), kInternalTolerance)};
}

Channel channel_of(const JointDistribution& j) {
  const Eigen::VectorXd px = j.px();
  Eigen::MatrixXd pyx = px.cwiseInverse().asDiagonal() * j.pxy();
  return Channel::from(std::move(pyx), Pmf::from(j.x_labels(), px, kInternalTolerance), j.y_labels(),
                       kInternalTolerance);
}

JointDistribution joint_of(const Channel& c) {
  Eigen::MatrixXd pxy = c.input().probs().asDiagonal() * c.pyx();
  return JointDistribution::from(std::move(pxy), c.x_labels(), c.y_labels(), kInternalTolerance);
}

Pmf push_forward(const Channel& c, const Pmf& r) {
  if (r.size() != c.size_x() || r.labels() != c.x_labels()) {
    throw Error(ErrorCode::LabelMismatch, "push_forward: r is not on the channel's input alphabet");
  }
  Eigen::VectorXd ry = c.pyx().transpose() * r.probs();
  return Pmf::from(c.y_labels(), std::move(ry), kInternalTolerance);
}

double entropy(const Pmf& p, LogBase base) { return entropy(p.probs(), base); }

double kl_divergence(const Pmf& r, const Pmf& p, LogBase base) {
  if (r.labels() != p.labels()) throw Error(ErrorCode::LabelMismatch, "kl_divergence: alphabets differ");
  return kl_divergence(r.probs(), p.probs(), base);
}

double mutual_information(const JointDistribution& j, LogBase base) {
  return mutual_information(j.pxy(), base);
}

JointDistribution product(const JointDistribution& j1, const JointDistribution& j2) {
  auto pair_labels = [](const Labels& a, const Labels& b) {
    Labels out;
    out.reserve(a.size() * b.size());
    for (const auto& u : a) {
      for (const auto& v : b) out.push_back("(" + u + "," + v + ")");
    }
    return out;
  };
  const auto& a = j1.pxy();
  const auto& b = j2.pxy();
  Eigen::MatrixXd table(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      table.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    }
  }
  return JointDistribution::from(std::move(table), pair_labels(j1.x_labels(), j2.x_labels()),
                                 pair_labels(j1.y_labels(), j2.y_labels()), kInternalTolerance);
}

double lp_norm(const Eigen::VectorXd& values, const Pmf& weights, double p) {
  return lp_norm(values, weights.probs(), p);
}

Eigen::VectorXd conditional_expectation(const JointDistribution& j, const Eigen::VectorXd& g) {
  if (g.size() != j.size_y()) throw Error(ErrorCode::ShapeMismatch, "g must be indexed by Y");
  return (j.pxy() * g).cwiseQuotient(j.px());
}

}  // namespace sdpi
