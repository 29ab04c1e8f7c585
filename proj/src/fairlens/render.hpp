#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "fairlens/cluster.hpp"
#include "fairlens/fairmatrix.hpp"
#include "fairlens/pca.hpp"
#include "fairlens/robustness.hpp"

namespace fairlens {

/// Sequential color scale over [0,1], piecewise linear in sRGB between the
/// anchors #440154 (0), #3b528b (0.25), #21918c (0.5), #5ec962 (0.75),
/// #fde725 (1). Inputs are clamped.
std::string sequential_color(double v);

/// Heatmap of `m` with its rows and columns in dendrogram leaf order, the
/// column dendrogram above and the row dendrogram on the left. Element
/// classes: "cell" per matrix entry, "flag" per imputed entry, "col-merge"
/// and "row-merge" per linkage merge. Column labels carry the variance to
/// three decimals.
std::string render_clustermap_svg(const MetricsMatrix& m, const Linkage& columns, const Linkage& rows,
                                  const Eigen::VectorXd& variances, const std::string& title = {});

/// Scatter of the first two aligned components: marker shape per model,
/// color per group, crosshair at the reference group. One element of class
/// "marker" per (model, group). `models` restricts the plotted models (all
/// when empty). Requires at least two components.
std::string render_pca_scatter_svg(const AlignedProjection& projection, std::span<const std::string> models = {},
                                   const std::string& title = {});

/// Condition-by-condition heatmap of mean correlations, annotated with
/// mean and std. Colors map [-1,1] onto the sequential scale.
std::string render_robustness_svg(const CorrelationSummary& summary);

}  // namespace fairlens
