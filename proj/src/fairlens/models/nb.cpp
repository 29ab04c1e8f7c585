#include "fairlens/models/nb.hpp"

#include <cmath>
#include <numbers>

#include "fairlens/error.hpp"

namespace fairlens {

GaussianNaiveBayes GaussianNaiveBayes::fit(const Eigen::MatrixXd& x, std::span<const int> y) {
  GaussianNaiveBayes nb;
  const Eigen::Index f = x.cols();
  double counts[2] = {0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    nb.means_[c] = Eigen::RowVectorXd::Zero(f);
    nb.variances_[c] = Eigen::RowVectorXd::Zero(f);
  }
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const int c = y[static_cast<std::size_t>(r)];
    counts[c] += 1.0;
    nb.means_[c] += x.row(r);
  }
  if (counts[0] == 0 || counts[1] == 0) throw domain_error("naive Bayes needs both classes in training data");
  for (int c = 0; c < 2; ++c) nb.means_[c] /= counts[c];
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const int c = y[static_cast<std::size_t>(r)];
    nb.variances_[c] += (x.row(r) - nb.means_[c]).array().square().matrix();
  }
  for (int c = 0; c < 2; ++c) nb.variances_[c] /= counts[c];

  const Eigen::RowVectorXd overall_mean = x.colwise().mean();
  const double max_var =
      f > 0 ? ((x.rowwise() - overall_mean).array().square().colwise().sum() / static_cast<double>(x.rows())).maxCoeff()
            : 0.0;
  const double epsilon = 1e-9 * max_var;
  for (int c = 0; c < 2; ++c) {
    nb.variances_[c].array() += epsilon;
    // a constant feature inside both classes would give zero variance
    for (Eigen::Index j = 0; j < f; ++j) {
      if (!(nb.variances_[c](j) > 0.0)) nb.variances_[c](j) = 1e-9;
    }
    nb.log_prior_[c] = std::log(counts[c] / static_cast<double>(x.rows()));
  }
  return nb;
}

double GaussianNaiveBayes::joint_log_likelihood(const Eigen::Ref<const Eigen::RowVectorXd>& row, int cls) const {
  const auto& mu = means_[cls];
  const auto& var = variances_[cls];
  const double log_norm = -0.5 * (2.0 * std::numbers::pi * var.array()).log().sum();
  const double quad = -0.5 * ((row - mu).array().square() / var.array()).sum();
  return log_prior_[cls] + log_norm + quad;
}

std::vector<double> GaussianNaiveBayes::predict_scores(const Eigen::MatrixXd& x) const {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double d = joint_log_likelihood(x.row(r), 0) - joint_log_likelihood(x.row(r), 1);
    // P(y=1|x) = 1 / (1 + exp(l0 - l1))
    out[static_cast<std::size_t>(r)] = d > 0 ? std::exp(-d) / (1.0 + std::exp(-d)) : 1.0 / (1.0 + std::exp(d));
  }
  return out;
}

}  // namespace fairlens
