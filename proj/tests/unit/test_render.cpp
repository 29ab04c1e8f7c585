#include <gtest/gtest.h>

#include <string>

#include "fairlens/cluster.hpp"
#include "fairlens/pca.hpp"
#include "fairlens/render.hpp"
#include "fairlens/robustness.hpp"
#include "test_support.hpp"

using namespace fairlens;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<std::string> metric_labels() {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < kMetricCount; ++j) out.emplace_back(metric_name(j));
  return out;
}

std::vector<std::string> row_labels(const MetricsMatrix& m) {
  std::vector<std::string> out;
  for (const auto& r : m.rows) out.push_back(r.label());
  return out;
}

}  // namespace

TEST(Color, AnchorsAndClamping) {
  EXPECT_EQ(sequential_color(0.0), "#440154");
  EXPECT_EQ(sequential_color(0.5), "#21918c");
  EXPECT_EQ(sequential_color(1.0), "#fde725");
  EXPECT_EQ(sequential_color(-3.0), "#440154");
  EXPECT_EQ(sequential_color(7.0), "#fde725");
}

TEST(Clustermap, ElementCounts) {
  auto m = testing_support::random_matrix({"logit", "mlp"}, 5, 1);
  m.imputed[3][2] = true;
  const auto cols = upgma(correlation_distance(m.values, DistanceAxis::Columns, metric_labels()));
  const auto rows = upgma(correlation_distance(m.values, DistanceAxis::Rows, row_labels(m)));
  const auto svg = render_clustermap_svg(m, cols, rows, m.column_variances, "toy");
  EXPECT_EQ(count(svg, "class=\"cell\""), 130u);
  EXPECT_EQ(count(svg, "class=\"col-merge\""), 12u);
  EXPECT_EQ(count(svg, "class=\"row-merge\""), 9u);
  EXPECT_EQ(count(svg, "class=\"flag\""), 1u);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg "), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  char label[64];
  std::snprintf(label, sizeof label, "TPR (%.3f)", m.column_variances(static_cast<Eigen::Index>(Metric::TPR)));
  EXPECT_NE(svg.find(label), std::string::npos);
}

TEST(Clustermap, Deterministic) {
  const auto m = testing_support::random_matrix({"a"}, 3, 2);
  const auto cols = upgma(correlation_distance(m.values, DistanceAxis::Columns, metric_labels()));
  const auto rows = upgma(correlation_distance(m.values, DistanceAxis::Rows, row_labels(m)));
  EXPECT_EQ(render_clustermap_svg(m, cols, rows, m.column_variances),
            render_clustermap_svg(m, cols, rows, m.column_variances));
}

TEST(Scatter, OneMarkerPerModelAndGroup) {
  const auto m = testing_support::random_matrix({"logit", "mlp"}, 5, 3);
  const auto p = reference_aligned_projection(m, "logit", "g0");
  const auto svg = render_pca_scatter_svg(p.aligned);
  EXPECT_EQ(count(svg, "class=\"marker\""), 10u);
  EXPECT_EQ(count(svg, "class=\"crosshair\""), 2u);
  EXPECT_NE(svg.find("PC1"), std::string::npos);
  const std::vector<std::string> only{"mlp"};
  EXPECT_EQ(count(render_pca_scatter_svg(p.aligned, only), "class=\"marker\""), 5u);
}

TEST(Scatter, NeedsTwoComponents) {
  const auto m = testing_support::random_matrix({"logit"}, 2, 4);
  const auto p = reference_aligned_projection(m, "logit", "g0");
  EXPECT_THROW(render_pca_scatter_svg(p.aligned), std::exception);
}

TEST(RobustnessHeatmap, CellPerPair) {
  CorrelationMatrix c{{"d/x", "d/y", "e/z"}, Eigen::MatrixXd::Identity(3, 3)};
  c.values(0, 1) = c.values(1, 0) = -0.2;
  const auto s = aggregate_over_seeds({c});
  const auto svg = render_robustness_svg(s);
  EXPECT_EQ(count(svg, "class=\"cell\""), 9u);
  EXPECT_NE(svg.find("d/x"), std::string::npos);
}
