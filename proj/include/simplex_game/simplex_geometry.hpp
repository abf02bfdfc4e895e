#pragma once

// Weighted simplices that turn node choice into vector geometry: with vertices
// q_r satisfying q_r.q_l = -1 + delta_rl / sqrt(y_r y_l), the linear payoff of
// an occupant of node r is -(1/N) q_r.b, where b is the aggregate bet.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "simplex_game/errors.hpp"

namespace sgame {

inline constexpr double kStrengthSumTolerance = 1e-12;
inline constexpr double kDefaultPropernessThreshold = 10.0;

/// Normalized node strengths y_r; an interior point of the probability simplex.
class StrengthDistribution {
public:
  /// Validates and stores `weights` as-is; they must already sum to one.
  explicit StrengthDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
    validate(weights_);
  }

  /// Normalizes arbitrary positive weights, e.g. spectral efficiencies in Mbps.
  static StrengthDistribution from_weights(std::span<const double> raw) {
    if (raw.size() < 2) throw ValidationError("strength distribution needs at least 2 nodes");
    double total = 0.0;
    for (double w : raw) {
      if (!std::isfinite(w) || w <= 0.0) throw ValidationError("node weights must be positive and finite");
      total += w;
    }
    std::vector<double> y(raw.size());
    std::transform(raw.begin(), raw.end(), y.begin(), [total](double w) { return w / total; });
    return StrengthDistribution(std::move(y));
  }

  static StrengthDistribution uniform(std::size_t node_count) {
    if (node_count < 2) throw ValidationError("strength distribution needs at least 2 nodes");
    return StrengthDistribution(std::vector<double>(node_count, 1.0 / static_cast<double>(node_count)));
  }

  std::size_t node_count() const noexcept { return weights_.size(); }
  double operator[](std::size_t r) const { return weights_[r]; }
  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const StrengthDistribution&, const StrengthDistribution&) = default;

private:
  static void validate(const std::vector<double>& y) {
    if (y.size() < 2) throw ValidationError("strength distribution needs at least 2 nodes");
    double total = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) {
      if (!std::isfinite(y[r]) || y[r] <= 0.0) {
        std::ostringstream msg;
        msg << "strength y[" << r << "] = " << y[r] << " is not positive";
        throw ValidationError(msg.str());
      }
      total += y[r];
    }
    if (std::abs(total - 1.0) > kStrengthSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "strengths sum to " << total << ", expected 1";
      throw ValidationError(msg.str());
    }
  }

  std::vector<double> weights_;
};

/// B vertices in R^(B-1), stored as rows, plus their Gram matrix.
class YSimplex {
public:
  YSimplex(StrengthDistribution strengths, Eigen::MatrixXd vertices)
      : strengths_(std::move(strengths)), vertices_(std::move(vertices)) {
    const auto b = static_cast<Eigen::Index>(strengths_.node_count());
    if (vertices_.rows() != b || vertices_.cols() != b - 1)
      throw ValidationError("simplex vertices must be a B x (B-1) matrix");
    gram_ = vertices_ * vertices_.transpose();
  }

  const StrengthDistribution& strengths() const noexcept { return strengths_; }
  std::size_t node_count() const noexcept { return strengths_.node_count(); }
  std::size_t dimension() const noexcept { return strengths_.node_count() - 1; }

  const Eigen::MatrixXd& vertices() const noexcept { return vertices_; }
  auto vertex(std::size_t r) const { return vertices_.row(static_cast<Eigen::Index>(r)); }

  /// Realized dot products q_r.q_l of the stored vertices.
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  double dot(std::size_t r, std::size_t l) const {
    return gram_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l));
  }
  double squared_norm(std::size_t r) const { return dot(r, r); }

private:
  StrengthDistribution strengths_;
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXd gram_;
};

/// Target Gram entry -1 + delta_rl / sqrt(y_r y_l).
inline double target_gram(const StrengthDistribution& y, std::size_t r, std::size_t l) {
  return -1.0 + (r == l ? 1.0 / std::sqrt(y[r] * y[l]) : 0.0);
}

inline Eigen::MatrixXd target_gram_matrix(const StrengthDistribution& y) {
  const auto b = static_cast<Eigen::Index>(y.node_count());
  Eigen::MatrixXd g(b, b);
  for (Eigen::Index r = 0; r < b; ++r)
    for (Eigen::Index l = 0; l < b; ++l)
      g(r, l) = target_gram(y, static_cast<std::size_t>(r), static_cast<std::size_t>(l));
  return g;
}

inline constexpr double kMaxGramDefect = 1e-10;

/// max_{r,l} |q_r.q_l - (-1 + delta_rl / sqrt(y_r y_l))|
inline double gram_defect(const YSimplex& s) {
  const auto& y = s.strengths();
  double worst = 0.0;
  for (std::size_t r = 0; r < s.node_count(); ++r)
    for (std::size_t l = 0; l < s.node_count(); ++l)
      worst = std::max(worst, std::abs(s.dot(r, l) - target_gram(y, r, l)));
  return worst;
}

/// Builds a y-simplex by factoring the target Gram matrix.
///
/// The Gram matrix is positive semidefinite with a one-dimensional kernel
/// spanned by y. Eigenpairs are sorted by descending eigenvalue (ties by
/// index), the zero mode is dropped and the vertices are the rows of
/// V * sqrt(Lambda). Throws DegeneracyError if more than one eigenvalue is
/// numerically zero, or if the factored vertices miss the target Gram matrix
/// by more than kMaxGramDefect (strength ratios beyond double precision).
inline YSimplex build_simplex(const StrengthDistribution& y) {
  const auto b = static_cast<Eigen::Index>(y.node_count());
  const Eigen::MatrixXd g = target_gram_matrix(y);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
  if (solver.info() != Eigen::Success) throw DegeneracyError("Gram eigendecomposition failed");

  const Eigen::VectorXd& values = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(b));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index c) { return values(a) > values(c); });

  const double largest = values(order.front());
  const double zero_cut = 1e-9 * std::abs(largest);
  std::size_t zero_modes = 0;
  for (Eigen::Index k = 0; k < b; ++k)
    if (std::abs(values(k)) <= zero_cut) ++zero_modes;
  if (zero_modes != 1) {
    std::ostringstream msg;
    msg << "Gram matrix has " << zero_modes << " near-zero eigenvalues (expected 1); strengths too degenerate";
    throw DegeneracyError(msg.str());
  }

  Eigen::MatrixXd vertices(b, b - 1);
  Eigen::Index col = 0;
  for (Eigen::Index k : order) {
    if (std::abs(values(k)) <= zero_cut) continue;
    if (values(k) < 0.0) throw DegeneracyError("Gram matrix has a negative eigenvalue");
    vertices.col(col++) = solver.eigenvectors().col(k) * std::sqrt(values(k));
  }
  YSimplex out(y, std::move(vertices));
  if (const double defect = gram_defect(out); !(defect <= kMaxGramDefect)) {
    std::ostringstream msg;
    msg << "factored simplex misses the Gram matrix by " << defect << "; strengths too degenerate";
    throw DegeneracyError(msg.str());
  }
  return out;
}


struct WeightedMoments {
  double centroid_norm;  // |sum_r y_r q_r|
  double norm_sum;       // sum_r y_r |q_r|^2
};

inline WeightedMoments weighted_moments(const YSimplex& s) {
  const auto& y = s.strengths();
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dimension()));
  double norm_sum = 0.0;
  for (std::size_t r = 0; r < s.node_count(); ++r) {
    centroid += y[r] * s.vertex(r).transpose();
    norm_sum += y[r] * s.vertex(r).squaredNorm();
  }
  return {centroid.norm(), norm_sum};
}

/// |sum_r y_r (q_r.x)^2 - x^2|; zero for every x on a valid simplex.
inline double isometry_defect(const YSimplex& s, std::span<const double> x) {
  if (x.size() != s.dimension()) {
    std::ostringstream msg;
    msg << "vector has dimension " << x.size() << ", simplex lives in dimension " << s.dimension();
    throw ValidationError(msg.str());
  }
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  const auto& y = s.strengths();
  double lhs = 0.0;
  for (std::size_t r = 0; r < s.node_count(); ++r) {
    const double proj = s.vertex(r).dot(v);
    lhs += y[r] * proj * proj;
  }
  return std::abs(lhs - v.squaredNorm());
}

/// Smallest |q_r|^2 |q_l|^2 - (q_r.q_l)^2 over r != l; nonnegative when the
/// target Gram matrix is realizable.
inline double cauchy_schwarz_slack(const YSimplex& s) {
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < s.node_count(); ++r)
    for (std::size_t l = 0; l < s.node_count(); ++l)
      if (r != l) slack = std::min(slack, s.dot(r, r) * s.dot(l, l) - s.dot(r, l) * s.dot(r, l));
  return slack;
}

struct PropernessReport {
  double index;
  bool is_proper;
};

/// index = (1/(B-1)) sum_r (1/y_r - B); zero iff y is uniform.
inline PropernessReport properness(const StrengthDistribution& y,
                                   double threshold = kDefaultPropernessThreshold) {
  if (!(threshold > 0.0)) throw ValidationError("properness threshold must be positive");
  const auto b = static_cast<double>(y.node_count());
  double sum = 0.0;
  for (double w : y.weights()) sum += 1.0 / w - b;
  const double index = sum / (b - 1.0);
  return {index, index <= threshold};
}

}  // namespace sgame
