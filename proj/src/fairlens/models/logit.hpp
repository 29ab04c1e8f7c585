#pragma once

#include <Eigen/Dense>
#include <span>

#include "fairlens/models/model.hpp"

namespace fairlens {

/// L2-regularized logistic regression fit by full-batch Newton iterations.
///
/// Objective (bias unpenalized):
///   f(w, b) = mean_i softplus(z_i) - y_i z_i  +  ||w||^2 / (2 C N),   z = Xw + b
/// which has the same minimizer as the usual C * sum(loss) + ||w||^2 / 2.
/// Damped Newton: each step solves with the exact Hessian and backtracks until
/// the Armijo condition holds; iteration stops once ||grad f|| < 1e-8.
class LogisticRegression final : public Classifier {
 public:
  struct Options {
    double gradient_tolerance = 1e-8;
    int max_iterations = 200;
  };

  LogisticRegression(Eigen::VectorXd weights, double bias);

  static LogisticRegression fit(const Eigen::MatrixXd& x, std::span<const int> y, const LogitParams& params,
                                const Options& options);
  static LogisticRegression fit(const Eigen::MatrixXd& x, std::span<const int> y, const LogitParams& params) {
    return fit(x, y, params, Options{});
  }

  /// Objective value; fills `grad` (size F + 1, bias last) when non-null.
  static double objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2,
                          const Eigen::VectorXd& theta, Eigen::VectorXd* grad);

  std::vector<double> predict_scores(const Eigen::MatrixXd& x) const override;

  const Eigen::VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }
  int iterations() const { return iterations_; }

 private:
  Eigen::VectorXd weights_;
  double bias_ = 0.0;
  int iterations_ = 0;
};

}  // namespace fairlens
