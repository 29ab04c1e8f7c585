#include "fairlens/models/logit.hpp"

#include <cmath>

#include "fairlens/error.hpp"

namespace fairlens {

namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LogisticRegression::LogisticRegression(Eigen::VectorXd weights, double bias)
    : weights_(std::move(weights)), bias_(bias) {}

double LogisticRegression::objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2,
                                     const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
  const Eigen::Index f = x.cols();
  const auto n = static_cast<double>(x.rows());
  const auto w = theta.head(f);
  const double b = theta(f);
  const Eigen::VectorXd z = (x * w).array() + b;

  double loss = 0.0;
  Eigen::VectorXd residual(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    loss += softplus(z(i)) - y(i) * z(i);
    residual(i) = sigmoid(z(i)) - y(i);
  }
  loss = loss / n + 0.5 * l2 * w.squaredNorm();
  if (grad != nullptr) {
    grad->resize(f + 1);
    grad->head(f) = x.transpose() * residual / n + l2 * w;
    (*grad)(f) = residual.sum() / n;
  }
  return loss;
}

LogisticRegression LogisticRegression::fit(const Eigen::MatrixXd& x, std::span<const int> y_in,
                                           const LogitParams& params, const Options& options) {
  if (!(params.c > 0.0)) throw invalid_argument("logit C must be positive");
  const Eigen::Index f = x.cols();
  Eigen::VectorXd y(static_cast<Eigen::Index>(y_in.size()));
  for (std::size_t i = 0; i < y_in.size(); ++i) y(static_cast<Eigen::Index>(i)) = y_in[i];
  const double l2 = 1.0 / (params.c * static_cast<double>(x.rows()));

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(f + 1);
  Eigen::VectorXd grad;
  double value = objective(x, y, l2, theta, &grad);
  const auto n = static_cast<double>(x.rows());
  int iter = 0;
  for (; iter < options.max_iterations && grad.norm() >= options.gradient_tolerance; ++iter) {
    // Hessian of the objective: [X 1]^T diag(p(1-p)) [X 1] / n + l2 on the weight block.
    const Eigen::VectorXd z = (x * theta.head(f)).array() + theta(f);
    Eigen::VectorXd weight(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double p = sigmoid(z(i));
      weight(i) = p * (1.0 - p) / n;
    }
    Eigen::MatrixXd hessian(f + 1, f + 1);
    const Eigen::MatrixXd wx = x.array().colwise() * weight.array();
    hessian.topLeftCorner(f, f) = x.transpose() * wx;
    hessian.topLeftCorner(f, f).diagonal().array() += l2;
    hessian.topRightCorner(f, 1) = wx.colwise().sum().transpose();
    hessian.bottomLeftCorner(1, f) = hessian.topRightCorner(f, 1).transpose();
    hessian(f, f) = weight.sum();
    Eigen::VectorXd direction = hessian.ldlt().solve(grad);
    if (!direction.allFinite() || direction.dot(grad) <= 0.0) direction = grad;

    const double slope = direction.dot(grad);
    double t = 1.0;
    Eigen::VectorXd candidate;
    Eigen::VectorXd candidate_grad;
    double candidate_value = 0.0;
    bool moved = false;
    for (int backtrack = 0; backtrack <= 60; ++backtrack, t *= 0.5) {
      candidate = theta - t * direction;
      candidate_value = objective(x, y, l2, candidate, &candidate_grad);
      if (std::isfinite(candidate_value) && candidate_value <= value - 1e-4 * t * slope) {
        moved = true;
        break;
      }
    }
    if (!moved) break;  // no decrease representable at this precision
    theta = std::move(candidate);
    grad = std::move(candidate_grad);
    value = candidate_value;
  }
  if (!theta.allFinite()) throw domain_error("logistic regression diverged");
  LogisticRegression model(theta.head(f), theta(f));
  model.iterations_ = iter;
  return model;
}

std::vector<double> LogisticRegression::predict_scores(const Eigen::MatrixXd& x) const {
  const Eigen::VectorXd z = (x * weights_).array() + bias_;
  std::vector<double> out(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) out[static_cast<std::size_t>(i)] = sigmoid(z(i));
  return out;
}

}  // namespace fairlens
