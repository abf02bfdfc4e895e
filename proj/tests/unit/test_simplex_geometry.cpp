#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace sgame;
using namespace testing_support;

namespace {

// Gram target written out independently of the library.
double expected_dot(const std::vector<double>& y, std::size_t r, std::size_t l) {
  return -1.0 + (r == l ? 1.0 / y[r] : 0.0);
}

}  // namespace

TEST(StrengthDistribution, RejectsInvalidWeights) {
  EXPECT_THROW(StrengthDistribution({1.0}), ValidationError);
  EXPECT_THROW(StrengthDistribution({0.5, 0.6}), ValidationError);
  EXPECT_THROW(StrengthDistribution({1.0, 0.0}), ValidationError);
  EXPECT_THROW(StrengthDistribution({1.2, -0.2}), ValidationError);
  EXPECT_NO_THROW(StrengthDistribution({0.25, 0.75}));
}

TEST(StrengthDistribution, FromWeightsNormalizes) {
  const auto y = StrengthDistribution::from_weights(std::vector<double>{1.06, 3.91, 11, 14.1});
  double total = 0;
  for (double w : y.weights()) total += w;
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(y[3], 14.1 / 30.07, 1e-15);
}

TEST(BuildSimplex, BinaryIsPlusMinusOne) {
  const auto s = build_simplex(StrengthDistribution::uniform(2));
  ASSERT_EQ(s.dimension(), 1u);
  EXPECT_NEAR(std::abs(s.vertices()(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(s.vertices()(0, 0), -s.vertices()(1, 0), 1e-12);
  EXPECT_NEAR(s.dot(0, 1), -1.0, 1e-12);
  EXPECT_NEAR(s.dot(0, 0), 1.0, 1e-12);
}

TEST(BuildSimplex, UniformThreeIsPlanarTriangle) {
  const auto s = build_simplex(StrengthDistribution::uniform(3));
  ASSERT_EQ(s.vertices().cols(), 2);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_NEAR(s.vertex(r).squaredNorm(), 2.0, 1e-12);
    for (std::size_t l = r + 1; l < 3; ++l) {
      EXPECT_NEAR(s.vertex(r).dot(s.vertex(l)), -1.0, 1e-12);
      const double cosine = s.vertex(r).dot(s.vertex(l)) / (s.vertex(r).norm() * s.vertex(l).norm());
      EXPECT_NEAR(std::acos(cosine), 2.0 * M_PI / 3.0, 1e-10);
    }
  }
}

TEST(BuildSimplex, HalfQuarterQuarter) {
  const std::vector<double> w{0.5, 0.25, 0.25};
  const auto s = build_simplex(StrengthDistribution(w));
  const double diag[] = {1, 3, 3};
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t l = 0; l < 3; ++l)
      EXPECT_NEAR(s.vertex(r).dot(s.vertex(l)), r == l ? diag[r] : -1.0, 1e-12);
  EXPECT_LE(weighted_moments(s).centroid_norm, 1e-12);
}

TEST(BuildSimplex, IsBitwiseDeterministic) {
  Rng rng(5);
  const auto y = random_proper_strengths(7, rng);
  const auto a = build_simplex(y);
  const auto b = build_simplex(y);
  ASSERT_EQ(a.vertices().size(), b.vertices().size());
  for (Eigen::Index k = 0; k < a.vertices().size(); ++k) EXPECT_EQ(a.vertices().data()[k], b.vertices().data()[k]);
}

TEST(BuildSimplex, NearDegenerateStrengthsAreRejected) {
  // Two heavy nodes and one negligible node: two eigenvalues fall under the zero-mode cut.
  EXPECT_THROW(build_simplex(StrengthDistribution({0.5, 0.5 - 1e-11, 1e-11})), DegeneracyError);
  // One heavy node: a single zero mode, but the factorization cannot meet the Gram target.
  EXPECT_THROW(build_simplex(StrengthDistribution({1.0 - 2e-9, 1e-9, 1e-9})), DegeneracyError);
  EXPECT_THROW(build_simplex(StrengthDistribution({1.0, 1e-17, 1e-17})), DegeneracyError);
  EXPECT_NO_THROW(build_simplex(StrengthDistribution({0.98, 0.01, 0.01})));
}

TEST(GramDefect, HandBuiltCases) {
  const auto y = StrengthDistribution::uniform(2);
  EXPECT_DOUBLE_EQ(gram_defect(YSimplex(y, Eigen::MatrixXd::Zero(2, 1))), 1.0);
  Eigen::MatrixXd pm(2, 1);
  pm << 1.0, -1.0;
  EXPECT_DOUBLE_EQ(gram_defect(YSimplex(y, pm)), 0.0);
}

TEST(WeightedMoments, Examples) {
  const auto binary = weighted_moments(build_simplex(StrengthDistribution::uniform(2)));
  EXPECT_NEAR(binary.centroid_norm, 0.0, 1e-12);
  EXPECT_NEAR(binary.norm_sum, 1.0, 1e-12);

  Rng rng(17);
  const auto five = weighted_moments(build_simplex(random_proper_strengths(5, rng)));
  EXPECT_NEAR(five.centroid_norm, 0.0, 1e-10);
  EXPECT_NEAR(five.norm_sum, 4.0, 1e-10);

  const auto hqq = weighted_moments(build_simplex(StrengthDistribution({0.5, 0.25, 0.25})));
  EXPECT_LE(hqq.centroid_norm, 1e-10);
  EXPECT_NEAR(hqq.norm_sum, 2.0, 1e-10);
}

TEST(IsometryDefect, ExamplesAndErrors) {
  const auto s3 = build_simplex(StrengthDistribution::uniform(3));
  EXPECT_EQ(isometry_defect(s3, std::vector<double>{0.0, 0.0}), 0.0);
  EXPECT_THROW(isometry_defect(s3, std::vector<double>{1.0}), ValidationError);

  const auto s2 = build_simplex(StrengthDistribution::uniform(2));
  for (double t : {0.5, -3.0, 17.25}) EXPECT_NEAR(isometry_defect(s2, std::vector<double>{t}), 0.0, 1e-12 * t * t);
}

TEST(GeometryProperties, RandomProperStrengths) {
  Rng rng(2024);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const int b = uniform_int(2, 10, rng);
    const auto y = random_proper_strengths(b, rng);
    const auto s = build_simplex(y);
    const std::vector<double> w(y.weights().begin(), y.weights().end());
    double worst = 0;
    for (std::size_t r = 0; r < s.node_count(); ++r)
      for (std::size_t l = 0; l < s.node_count(); ++l)
        worst = std::max(worst, std::abs(s.vertex(r).dot(s.vertex(l)) - expected_dot(w, r, l)));
    EXPECT_LE(worst, 1e-10);
    EXPECT_LE(gram_defect(s), 1e-10);
    const auto mom = weighted_moments(s);
    EXPECT_LE(mom.centroid_norm, 1e-10);
    EXPECT_NEAR(mom.norm_sum, b - 1, 1e-10);
    EXPECT_GE(cauchy_schwarz_slack(s), -1e-9);
    if (b >= 3) {
      std::vector<double> x(s.dimension());
      for (int k = 0; k < 100; ++k) {
        double norm = 0;
        for (auto& v : x) {
          v = normal(rng);
          norm += v * v;
        }
        for (auto& v : x) v /= std::sqrt(norm);
        EXPECT_LE(isometry_defect(s, x), 1e-9);
      }
    }
  }
}

TEST(Properness, Examples) {
  const auto uniform = properness(StrengthDistribution::uniform(6));
  EXPECT_NEAR(uniform.index, 0.0, 1e-12);
  EXPECT_TRUE(uniform.is_proper);

  EXPECT_NEAR(properness(StrengthDistribution({0.5, 0.25, 0.25})).index, 0.5, 1e-12);

  const auto skewed = properness(StrengthDistribution({0.98, 0.01, 0.01}));
  EXPECT_NEAR(skewed.index, ((1 / 0.98 - 3) + 97 + 97) / 2, 1e-9);
  EXPECT_NEAR(skewed.index, 96.0, 0.05);
  EXPECT_FALSE(skewed.is_proper);
  EXPECT_FALSE(properness(StrengthDistribution({0.98, 0.01, 0.01}), 1.0).is_proper);

  EXPECT_THROW(properness(StrengthDistribution::uniform(2), 0.0), ValidationError);
}
