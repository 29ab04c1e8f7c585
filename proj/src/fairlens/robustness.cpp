#include "fairlens/robustness.hpp"

#include <cmath>

#include "fairlens/csv.hpp"
#include "fairlens/error.hpp"
#include "fairlens/format.hpp"

namespace fairlens {

double distance_vector_correlation(const DistanceVector& a, const DistanceVector& b) {
  if (a.axis != DistanceAxis::Columns || b.axis != DistanceAxis::Columns) {
    throw invalid_argument("only column-axis (metric) distance vectors are comparable across conditions");
  }
  if (a.values.size() != b.values.size()) {
    throw invalid_argument("distance vectors differ in length: " + std::to_string(a.values.size()) + " vs " +
                           std::to_string(b.values.size()));
  }
  if (a.labels != b.labels) throw invalid_argument("distance vectors are over different metric orders");
  return pearson(a.values, b.values);
}

CorrelationMatrix correlate_conditions(const std::vector<DistanceVector>& vectors, std::vector<std::string> labels) {
  if (vectors.size() != labels.size()) throw invalid_argument("one label per distance vector expected");
  const auto n = static_cast<Eigen::Index>(vectors.size());
  CorrelationMatrix out{std::move(labels), Eigen::MatrixXd::Identity(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = distance_vector_correlation(vectors[i], vectors[j]);
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

CorrelationSummary aggregate_over_seeds(const std::vector<CorrelationMatrix>& per_seed) {
  if (per_seed.empty()) throw invalid_argument("aggregate_over_seeds needs at least one seed");
  const auto& first = per_seed.front();
  const auto n = static_cast<Eigen::Index>(first.labels.size());
  for (const auto& m : per_seed) {
    if (m.labels != first.labels) throw invalid_argument("condition sets differ across seeds");
    if (m.values.rows() != n || m.values.cols() != n) throw invalid_argument("correlation matrix shape mismatch");
  }

  CorrelationSummary out;
  out.labels = first.labels;
  out.seed_count = per_seed.size();
  out.mean = Eigen::MatrixXd::Identity(n, n);
  out.std = Eigen::MatrixXd::Zero(n, n);
  const double s = static_cast<double>(per_seed.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (const auto& m : per_seed) sum += m.values(i, j);
      const double mean = sum / s;
      double ss = 0.0;
      for (const auto& m : per_seed) ss += (m.values(i, j) - mean) * (m.values(i, j) - mean);
      const double sd = std::sqrt(ss / s);
      out.mean(i, j) = out.mean(j, i) = mean;
      out.std(i, j) = out.std(j, i) = sd;
    }
  }
  return out;
}

std::string summary_to_csv(const std::vector<std::string>& labels, const Eigen::MatrixXd& values) {
  std::string out;
  for (const auto& l : labels) out += "," + csv::escape(l);
  out += "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += csv::escape(labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < values.cols(); ++j) out += "," + format_double(values(i, j));
    out += "\n";
  }
  return out;
}

}  // namespace fairlens
