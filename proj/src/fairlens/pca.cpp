#include "fairlens/pca.hpp"

#include <algorithm>
#include <cmath>

#include "fairlens/error.hpp"

namespace fairlens {

PcaModel fit_pca(const Eigen::MatrixXd& matrix, std::size_t k, std::string fitted_on) {
  const auto rows = static_cast<std::size_t>(matrix.rows());
  const auto cols = static_cast<std::size_t>(matrix.cols());
  if (rows < 2) throw invalid_argument("PCA needs at least two rows");
  if (k < 1 || k > std::min(rows - 1, cols)) {
    throw invalid_argument("PCA component count " + std::to_string(k) + " outside [1, " +
                           std::to_string(std::min(rows - 1, cols)) + "]");
  }
  if (!matrix.allFinite()) throw domain_error("PCA input contains non-finite values");

  PcaModel model;
  model.fitted_on = std::move(fitted_on);
  model.column_means = matrix.colwise().mean();
  const Eigen::MatrixXd centered = matrix.rowwise() - model.column_means;
  if (centered.cwiseAbs().maxCoeff() == 0.0) throw domain_error("PCA input has zero variance (all rows identical)");

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd sq = svd.singularValues().array().square();
  const double total = sq.sum();
  if (!(total > 0.0)) throw domain_error("PCA input has zero variance");

  const auto kk = static_cast<Eigen::Index>(k);
  model.components = svd.matrixV().leftCols(kk).transpose();
  model.explained_variance_ratios = sq.head(kk) / total;
  for (Eigen::Index r = 0; r < kk; ++r) {
    Eigen::Index arg = 0;
    model.components.row(r).cwiseAbs().maxCoeff(&arg);
    if (model.components(r, arg) < 0) model.components.row(r) *= -1.0;
  }
  return model;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& matrix, const PcaModel& pca) {
  if (matrix.cols() != pca.components.cols()) {
    throw invalid_argument("projection: matrix has " + std::to_string(matrix.cols()) + " columns, PCA was fit on " +
                           std::to_string(pca.components.cols()));
  }
  return (matrix.rowwise() - pca.column_means) * pca.components.transpose();
}

AlignedProjection align_to_reference(std::vector<std::string> models, const std::vector<Eigen::MatrixXd>& projections,
                                     std::vector<std::string> groups, const std::string& reference,
                                     Eigen::VectorXd ratios) {
  if (models.size() != projections.size()) throw invalid_argument("alignment: one projection per model expected");
  const auto it = std::find(groups.begin(), groups.end(), reference);
  if (it == groups.end()) throw invalid_argument("alignment: reference group '" + reference + "' is missing");
  const auto ref_row = static_cast<Eigen::Index>(it - groups.begin());

  AlignedProjection out;
  out.reference_group = reference;
  out.groups = std::move(groups);
  out.models = std::move(models);
  out.explained_variance_ratios = std::move(ratios);
  for (std::size_t l = 0; l < projections.size(); ++l) {
    const Eigen::MatrixXd& p = projections[l];
    if (static_cast<std::size_t>(p.rows()) != out.groups.size()) {
      throw invalid_argument("alignment: model '" + out.models[l] + "' lacks rows for some groups");
    }
    const Eigen::RowVectorXd origin = p.row(ref_row);
    Eigen::MatrixXd aligned = p.rowwise() - origin;
    aligned.row(ref_row).setZero();
    out.coordinates.push_back(std::move(aligned));
  }
  return out;
}

PcaModel full_matrix_pca(const MetricsMatrix& m) {
  const auto rows = static_cast<std::size_t>(m.values.rows());
  if (rows < 2) throw invalid_argument("full-matrix PCA needs at least two rows");
  const std::size_t k = std::min(rows - 1, static_cast<std::size_t>(m.values.cols()));
  return fit_pca(m.values, k, "M_p");
}

std::size_t model_component_count(std::size_t groups) {
  return std::min<std::size_t>({groups > 0 ? groups - 1 : 0, 3, kMetricCount});
}

ModelProjection reference_aligned_projection(const MetricsMatrix& m, const std::string& reference_model,
                                             const std::string& reference_group) {
  const MetricsMatrix base = per_model_matrix(m, reference_model);
  ModelProjection out;
  out.pca = fit_pca(base.values, model_component_count(base.row_count()), reference_model);
  std::vector<Eigen::MatrixXd> projections;
  const auto models = m.models();
  for (const auto& model : models) projections.push_back(project(per_model_matrix(m, model).values, out.pca));
  out.aligned = align_to_reference(models, projections, base.groups(), reference_group, out.pca.explained_variance_ratios);
  return out;
}

}  // namespace fairlens
