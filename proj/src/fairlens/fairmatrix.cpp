#include "fairlens/fairmatrix.hpp"

#include <algorithm>
#include <cstdio>

#include "fairlens/csv.hpp"
#include "fairlens/error.hpp"

namespace fairlens {

std::vector<std::string> MetricsMatrix::models() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.model) == out.end()) out.push_back(r.model);
  }
  return out;
}

std::vector<std::string> MetricsMatrix::groups() const {
  std::vector<std::string> out;
  if (rows.empty()) return out;
  for (const auto& r : rows) {
    if (r.model == rows.front().model) out.push_back(r.group);
  }
  return out;
}

std::optional<std::size_t> MetricsMatrix::find_row(const std::string& model, const std::string& group) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].model == model && rows[i].group == group) return i;
  }
  return std::nullopt;
}

Eigen::VectorXd column_variances(const Eigen::MatrixXd& values) {
  if (values.rows() == 0) return Eigen::VectorXd::Zero(values.cols());
  const Eigen::RowVectorXd mean = values.colwise().mean();
  return ((values.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(values.rows()))
      .transpose();
}

MetricsMatrix assemble_matrix(std::span<const ModelGroupMetrics> models, const GroupIndex& groups,
                              MatrixProvenance provenance) {
  if (models.empty()) throw invalid_argument("metrics matrix needs at least one model");
  const auto order = groups.size_order();
  MetricsMatrix m;
  m.provenance = std::move(provenance);
  m.values.resize(static_cast<Eigen::Index>(models.size() * order.size()), static_cast<Eigen::Index>(kMetricCount));
  Eigen::Index row = 0;
  for (const auto& model : models) {
    if (model.by_group.size() != groups.group_count()) {
      throw invalid_argument("model '" + model.model + "' is missing metric vectors for some groups of '" +
                             groups.feature + "'");
    }
    for (std::size_t g : order) {
      const MetricVector& v = model.by_group[g];
      m.rows.push_back({model.model, groups.labels[g], groups.feature});
      for (std::size_t j = 0; j < kMetricCount; ++j) m.values(row, static_cast<Eigen::Index>(j)) = v.values[j];
      m.imputed.push_back(v.imputed);
      ++row;
    }
  }
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < m.rows.size(); ++j) {
      if (m.rows[i].model == m.rows[j].model && m.rows[i].group == m.rows[j].group) {
        throw invalid_argument("duplicate (model, group) row '" + m.rows[i].label() + "'");
      }
    }
  }
  m.column_variances = column_variances(m.values);
  return m;
}

MetricsMatrix per_model_matrix(const MetricsMatrix& m, const std::string& model) {
  std::vector<Eigen::Index> picked;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (m.rows[i].model == model) picked.push_back(static_cast<Eigen::Index>(i));
  }
  if (picked.empty()) throw invalid_argument("model '" + model + "' is not in the metrics matrix");
  MetricsMatrix out;
  out.provenance = m.provenance;
  out.values.resize(static_cast<Eigen::Index>(picked.size()), m.values.cols());
  for (std::size_t r = 0; r < picked.size(); ++r) {
    out.values.row(static_cast<Eigen::Index>(r)) = m.values.row(picked[r]);
    out.rows.push_back(m.rows[static_cast<std::size_t>(picked[r])]);
    out.imputed.push_back(m.imputed[static_cast<std::size_t>(picked[r])]);
  }
  out.column_variances = column_variances(out.values);
  return out;
}

std::optional<double> fairness_ratio(const MetricsMatrix& m, Metric metric, const std::string& model,
                                     const std::string& group_g, const std::string& group_h) {
  const auto g = m.find_row(model, group_g);
  const auto h = m.find_row(model, group_h);
  if (!g) throw invalid_argument("no row for model '" + model + "', group '" + group_g + "'");
  if (!h) throw invalid_argument("no row for model '" + model + "', group '" + group_h + "'");
  const auto j = static_cast<Eigen::Index>(metric);
  const double den = m.values(static_cast<Eigen::Index>(*h), j);
  if (den == 0.0) return std::nullopt;
  return m.values(static_cast<Eigen::Index>(*g), j) / den;
}

MetricVector aggregate_over_folds(std::span<const GroupTally> folds, std::uint64_t n_total) {
  if (folds.empty()) throw invalid_argument("aggregation needs at least one fold");
  ConfusionCounts counts;
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& fold : folds) {
    counts += fold.counts;
    scores.insert(scores.end(), fold.scores.begin(), fold.scores.end());
    labels.insert(labels.end(), fold.labels.begin(), fold.labels.end());
  }
  if (counts.total() == 0) return MetricVector::undefined();
  return compute_metric_vector(counts, auc_or_imputed(scores, labels), n_total);
}

std::string matrix_to_csv(const MetricsMatrix& m) {
  std::string out = "row";
  for (std::size_t j = 0; j < kMetricCount; ++j) {
    out += ',';
    out += metric_name(j);
  }
  out += '\n';
  char buf[40];
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    out += csv::escape(m.rows[i].label());
    for (std::size_t j = 0; j < kMetricCount; ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace fairlens
