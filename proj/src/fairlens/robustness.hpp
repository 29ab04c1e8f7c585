#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "fairlens/cluster.hpp"

namespace fairlens {

/// Pearson correlation of two column-axis distance vectors over the same
/// metrics in the same order.
double distance_vector_correlation(const DistanceVector& a, const DistanceVector& b);

/// Condition-by-condition correlation matrix for one seed.
struct CorrelationMatrix {
  std::vector<std::string> labels;  // "dataset/feature"
  Eigen::MatrixXd values;
};

/// Correlations between every pair of conditions; `labels[i]` names
/// `vectors[i]`. The diagonal is exactly 1.
CorrelationMatrix correlate_conditions(const std::vector<DistanceVector>& vectors, std::vector<std::string> labels);

/// Elementwise mean and population standard deviation over seeds.
/// Symmetric, mean diagonal exactly 1, std diagonal exactly 0.
struct CorrelationSummary {
  std::vector<std::string> labels;
  Eigen::MatrixXd mean;
  Eigen::MatrixXd std;
  std::size_t seed_count = 0;
};

/// Every seed must carry the same labels in the same order.
CorrelationSummary aggregate_over_seeds(const std::vector<CorrelationMatrix>& per_seed);

/// Square CSV, header ",label1,label2,...", 17 significant digits.
std::string summary_to_csv(const std::vector<std::string>& labels, const Eigen::MatrixXd& values);

}  // namespace fairlens
