#pragma once

#include <Eigen/Dense>
#include <span>

#include "fairlens/models/model.hpp"

namespace fairlens {

/// Gaussian naive Bayes. Per-class feature means and population variances,
/// each variance inflated by 1e-9 times the largest feature variance; class
/// priors are the training frequencies. Scores are P(y = 1 | x).
class GaussianNaiveBayes final : public Classifier {
 public:
  static GaussianNaiveBayes fit(const Eigen::MatrixXd& x, std::span<const int> y);

  std::vector<double> predict_scores(const Eigen::MatrixXd& x) const override;

  /// log P(x | y = c) + log P(y = c)
  double joint_log_likelihood(const Eigen::Ref<const Eigen::RowVectorXd>& row, int cls) const;

  const Eigen::RowVectorXd& mean(int cls) const { return means_[cls]; }
  const Eigen::RowVectorXd& variance(int cls) const { return variances_[cls]; }

 private:
  Eigen::RowVectorXd means_[2];
  Eigen::RowVectorXd variances_[2];
  double log_prior_[2] = {0.0, 0.0};
};

}  // namespace fairlens
