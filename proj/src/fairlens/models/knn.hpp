#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "fairlens/models/model.hpp"

namespace fairlens {

/// Brute-force k-nearest-neighbors scorer: the score is the fraction of
/// positive labels among the k closest training rows.
///
/// Neighbors are ranked by (distance, feature vector lexicographically,
/// label). Rows that compare equal under that key are interchangeable, so the
/// selected label multiset, and hence the score, does not depend on the order
/// of the training rows.
class KNearestNeighbors final : public Classifier {
 public:
  KNearestNeighbors(Eigen::MatrixXd x, std::vector<int> y, KnnParams params);

  std::vector<double> predict_scores(const Eigen::MatrixXd& x) const override;

  /// Monotone surrogate of the metric (Minkowski p=3 and Euclidean without the root).
  static double distance(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b,
                         DistanceMetric metric);

 private:
  Eigen::MatrixXd x_;  // training rows
  std::vector<int> y_;
  KnnParams params_;
};

}  // namespace fairlens
