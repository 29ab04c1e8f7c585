#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "fairlens/fairmatrix.hpp"

namespace fairlens {

/// Principal axes of a metrics matrix. Rows of `components` are orthonormal
/// directions in metric space ordered by explained variance; the entry of
/// largest magnitude in each row is non-negative.
struct PcaModel {
  Eigen::MatrixXd components;  // K x J
  Eigen::RowVectorXd column_means;
  Eigen::VectorXd explained_variance_ratios;  // K, descending
  std::string fitted_on;

  std::size_t component_count() const { return static_cast<std::size_t>(components.rows()); }
};

/// Per-model projections translated so the reference group sits at the origin.
struct AlignedProjection {
  std::string reference_group;
  std::vector<std::string> groups;           // row order of every coordinate block
  std::vector<std::string> models;
  std::vector<Eigen::MatrixXd> coordinates;  // per model, G x K
  Eigen::VectorXd explained_variance_ratios;

  std::size_t component_count() const {
    return coordinates.empty() ? 0 : static_cast<std::size_t>(coordinates.front().cols());
  }
};

/// SVD of the column-centered matrix; ratios are squared singular values over
/// their total. Requires at least two rows and 1 <= k <= min(rows - 1, cols).
PcaModel fit_pca(const Eigen::MatrixXd& matrix, std::size_t k, std::string fitted_on = {});

/// (rows - fit means) * components^T
Eigen::MatrixXd project(const Eigen::MatrixXd& matrix, const PcaModel& pca);

/// Subtracts each model's projected reference-group row from all of its rows.
AlignedProjection align_to_reference(std::vector<std::string> models, const std::vector<Eigen::MatrixXd>& projections,
                                     std::vector<std::string> groups, const std::string& reference,
                                     Eigen::VectorXd ratios);

/// PCA of the whole metrics matrix with every available component.
PcaModel full_matrix_pca(const MetricsMatrix& m);

/// Components kept for a per-model fit on `groups` rows: min(groups - 1, 3, J).
std::size_t model_component_count(std::size_t groups);

/// Fits on `reference_model`'s rows of `m`, projects every model with those
/// axes, aligns on `reference_group`.
struct ModelProjection {
  PcaModel pca;
  AlignedProjection aligned;
};
ModelProjection reference_aligned_projection(const MetricsMatrix& m, const std::string& reference_model,
                                             const std::string& reference_group);

}  // namespace fairlens
