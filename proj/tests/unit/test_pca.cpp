#include <gtest/gtest.h>

#include <cmath>

#include "fairlens/error.hpp"
#include "fairlens/pca.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fairlens;

namespace {

Eigen::MatrixXd random_dense(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform01();
  return m;
}

}  // namespace

TEST(Pca, CollinearPoints) {
  Eigen::MatrixXd m(3, 2);
  m << 0, 0, 1, 1, 2, 2;
  const auto p = fit_pca(m, 1);
  EXPECT_NEAR(p.explained_variance_ratios(0), 1.0, 1e-12);
  EXPECT_NEAR(p.components(0, 0), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(p.components(0, 1), std::sqrt(0.5), 1e-12);
}

TEST(Pca, RatiosMatchCovarianceEigenvalues) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_dense(6, 13, seed);
    const auto p = fit_pca(m, 5);
    std::vector<double> flat(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < 6; ++r) {
      for (Eigen::Index c = 0; c < 13; ++c) flat[static_cast<std::size_t>(r * 13 + c)] = m(r, c);
    }
    const auto ratios = oracle::covariance_ratios(flat, 6, 13);
    for (Eigen::Index k = 0; k < 5; ++k) EXPECT_NEAR(p.explained_variance_ratios(k), ratios[static_cast<std::size_t>(k)], 1e-9);
  }
}

TEST(Pca, OrthonormalAndSignFixed) {
  const auto p = fit_pca(random_dense(8, 13, 3), 7);
  const Eigen::MatrixXd gram = p.components * p.components.transpose();
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-9);
  for (Eigen::Index k = 0; k < 7; ++k) {
    Eigen::Index at = 0;
    p.components.row(k).cwiseAbs().maxCoeff(&at);
    EXPECT_GE(p.components(k, at), 0.0);
  }
}

TEST(Pca, ProjectedVarianceReproducesRatiosAndConservesTotal) {
  const auto m = random_dense(7, 4, 4);
  const auto p = fit_pca(m, 4);
  const Eigen::MatrixXd s = project(m, p);
  const Eigen::RowVectorXd mean = m.colwise().mean();
  const double total = (m.rowwise() - mean).squaredNorm();
  double captured = 0.0;
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double var = s.col(k).squaredNorm();
    EXPECT_NEAR(var / total, p.explained_variance_ratios(k), 1e-9);
    captured += var;
  }
  EXPECT_NEAR(captured, total, 1e-9);
}

TEST(Pca, ProjectionIsLinear) {
  const auto m = random_dense(5, 13, 5);
  const auto p = fit_pca(m, 3);
  SplitMix64 rng(1);
  Eigen::RowVectorXd delta(13);
  for (Eigen::Index j = 0; j < 13; ++j) delta(j) = rng.uniform(-1, 1);
  const Eigen::MatrixXd shifted = m.rowwise() + delta;
  const Eigen::MatrixXd expected = project(m, p).rowwise() + delta * p.components.transpose();
  EXPECT_LT((project(shifted, p) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pca, RejectsBadInputs) {
  EXPECT_THROW(fit_pca(Eigen::MatrixXd::Ones(1, 3), 1), Error);
  EXPECT_THROW(fit_pca(random_dense(3, 4, 1), 3), Error);
  EXPECT_THROW(fit_pca(random_dense(3, 4, 1), 0), Error);
  EXPECT_THROW(fit_pca(Eigen::MatrixXd::Ones(4, 3), 1), Error);
  Eigen::MatrixXd bad = random_dense(3, 3, 2);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(fit_pca(bad, 1), Error);
}

TEST(Pca, ComponentCountCap) {
  EXPECT_EQ(model_component_count(2), 1u);
  EXPECT_EQ(model_component_count(5), 3u);
  EXPECT_EQ(model_component_count(20), 3u);
}

TEST(Pca, FullMatrixUsesEveryComponent) {
  const auto m = testing_support::random_matrix({"logit", "mlp"}, 5, 9);
  const auto p = full_matrix_pca(m);
  EXPECT_EQ(p.component_count(), 9u);
  EXPECT_NEAR(p.explained_variance_ratios.sum(), 1.0, 1e-9);
}

TEST(AlignedProjection, ReferenceSitsAtOrigin) {
  const auto m = testing_support::random_matrix({"logit", "mlp"}, 5, 11);
  const auto r = reference_aligned_projection(m, "logit", "g2");
  EXPECT_EQ(r.pca.component_count(), 3u);
  EXPECT_EQ(r.aligned.models, (std::vector<std::string>{"logit", "mlp"}));
  ASSERT_EQ(r.aligned.coordinates.size(), 2u);
  for (const auto& c : r.aligned.coordinates) {
    EXPECT_EQ(c.rows(), 5);
    EXPECT_EQ(c.row(2).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(AlignedProjection, IdenticalModelsOverlap) {
  auto m = testing_support::random_matrix({"a", "b"}, 4, 12);
  m.values.bottomRows(4) = m.values.topRows(4);
  const auto r = reference_aligned_projection(m, "a", "g0");
  EXPECT_EQ(r.aligned.coordinates[0], r.aligned.coordinates[1]);
}

TEST(AlignedProjection, AligningTwiceIsIdentity) {
  const auto m = testing_support::random_matrix({"a", "b"}, 4, 13);
  const auto r = reference_aligned_projection(m, "b", "g1");
  const auto again = align_to_reference(r.aligned.models, r.aligned.coordinates, r.aligned.groups, "g1",
                                        r.aligned.explained_variance_ratios);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(again.coordinates[i], r.aligned.coordinates[i]);
}

TEST(AlignedProjection, UnknownReferenceRejected) {
  const auto m = testing_support::random_matrix({"a"}, 3, 14);
  EXPECT_THROW(reference_aligned_projection(m, "a", "nope"), Error);
  EXPECT_THROW(reference_aligned_projection(m, "z", "g0"), Error);
}
