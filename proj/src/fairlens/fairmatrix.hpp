#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairlens/ingest.hpp"
#include "fairlens/metrics.hpp"

namespace fairlens {

struct RowKey {
  std::string model;
  std::string group;
  std::string feature;

  /// "model:group", the row label used in CSV exports.
  std::string label() const { return model + ":" + group; }
  friend bool operator==(const RowKey&, const RowKey&) = default;
};

struct MatrixProvenance {
  std::string dataset;
  std::string feature;
  std::uint64_t seed = 0;
  std::string aggregation = "micro";
};

/// Group-wise metric matrix: one row per (model, group), the 13 metrics as
/// columns.
struct MetricsMatrix {
  std::vector<RowKey> rows;
  Eigen::MatrixXd values;  // rows x kMetricCount
  std::vector<std::array<bool, kMetricCount>> imputed;
  Eigen::VectorXd column_variances;
  MatrixProvenance provenance;

  std::size_t row_count() const { return rows.size(); }
  std::vector<std::string> models() const;   // in row order, distinct
  std::vector<std::string> groups() const;   // group order of the first model
  std::optional<std::size_t> find_row(const std::string& model, const std::string& group) const;
};

/// Metric vectors of one model, indexed by group id of the GroupIndex.
struct ModelGroupMetrics {
  std::string model;
  std::vector<MetricVector> by_group;
};

/// Population variance of each column.
Eigen::VectorXd column_variances(const Eigen::MatrixXd& values);

/// Rows ordered models outer (in the given order), groups inner by descending
/// size then label.
MetricsMatrix assemble_matrix(std::span<const ModelGroupMetrics> models, const GroupIndex& groups,
                              MatrixProvenance provenance);

/// The rows of one model, same group order.
MetricsMatrix per_model_matrix(const MetricsMatrix& m, const std::string& model);

/// m_g(metric) / m_h(metric) for one model; nullopt when m_h(metric) is zero.
std::optional<double> fairness_ratio(const MetricsMatrix& m, Metric metric, const std::string& model,
                                     const std::string& group_g, const std::string& group_h);

/// Micro-average over test folds: counts are summed before rates are taken and
/// AUC is computed on the concatenated scores.
MetricVector aggregate_over_folds(std::span<const GroupTally> folds, std::uint64_t n_total);

/// Matrix to CSV: header "row,AUC,...,PPREV", rows labelled "model:group",
/// values with 17 significant digits.
std::string matrix_to_csv(const MetricsMatrix& m);

}  // namespace fairlens
