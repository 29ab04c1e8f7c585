#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "fairlens/models/model.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {

/// Fully connected network with ReLU hidden layers and a single sigmoid
/// output, trained on binary cross-entropy plus (l2 / 2) * sum ||W||^2 over
/// weight matrices (biases unpenalized). Samples are columns.
template <typename Scalar>
class MlpNetwork {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  struct Layer {
    Matrix weights;  // out x in
    Vector bias;
  };

  MlpNetwork() = default;
  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization of weights and biases.
  MlpNetwork(std::size_t inputs, std::span<const std::size_t> hidden, SplitMix64& rng);

  /// Output logits for a batch of samples (inputs x batch).
  RowVector logits(const Matrix& x) const;

  /// Mean loss over the batch; fills `grads` (same shapes as layers()) when non-null.
  Scalar loss_and_gradient(const Matrix& x, const RowVector& y, Scalar l2, std::vector<Layer>* grads) const;

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t inputs() const { return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().weights.cols()); }

  /// Flattened view for finite-difference checks.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> flatten() const;
  static Eigen::Matrix<Scalar, Eigen::Dynamic, 1> flatten(const std::vector<Layer>& layers);
  void unflatten(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& theta);

 private:
  std::vector<Layer> layers_;
};

extern template class MlpNetwork<float>;
extern template class MlpNetwork<double>;

/// Two hidden layers of widths P*F and (P+1)*F, minibatch SGD with momentum,
/// single precision.
class MlpClassifier final : public Classifier {
 public:
  explicit MlpClassifier(MlpNetwork<float> network) : network_(std::move(network)) {}

  static MlpClassifier fit(const Eigen::MatrixXd& x, std::span<const int> y, const MlpParams& params,
                           std::uint64_t seed);

  std::vector<double> predict_scores(const Eigen::MatrixXd& x) const override;

  const MlpNetwork<float>& network() const { return network_; }

 private:
  MlpNetwork<float> network_;
};

}  // namespace fairlens
