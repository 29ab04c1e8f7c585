#include "fairlens/models/mlp.hpp"

#include <cmath>
#include <numeric>

#include "fairlens/error.hpp"

namespace fairlens {

namespace {

template <typename Scalar>
Scalar softplus(Scalar z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= 0) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

}  // namespace

template <typename Scalar>
MlpNetwork<Scalar>::MlpNetwork(std::size_t inputs, std::span<const std::size_t> hidden, SplitMix64& rng) {
  std::vector<std::size_t> widths{inputs};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(1);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(widths[l]);
    const auto out = static_cast<Eigen::Index>(widths[l + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Layer layer{Matrix(out, in), Vector(out)};
    for (Eigen::Index c = 0; c < in; ++c) {
      for (Eigen::Index r = 0; r < out; ++r) layer.weights(r, c) = static_cast<Scalar>(rng.uniform(-bound, bound));
    }
    for (Eigen::Index r = 0; r < out; ++r) layer.bias(r) = static_cast<Scalar>(rng.uniform(-bound, bound));
    layers_.push_back(std::move(layer));
  }
}

template <typename Scalar>
typename MlpNetwork<Scalar>::RowVector MlpNetwork<Scalar>::logits(const Matrix& x) const {
  Matrix a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = layers_[l].weights * a;
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) z = z.cwiseMax(Scalar(0));
    a = std::move(z);
  }
  return a.row(0);
}

template <typename Scalar>
Scalar MlpNetwork<Scalar>::loss_and_gradient(const Matrix& x, const RowVector& y, Scalar l2,
                                             std::vector<Layer>* grads) const {
  const std::size_t depth = layers_.size();
  std::vector<Matrix> activations;  // activations[l] feeds layer l
  activations.reserve(depth + 1);
  activations.push_back(x);
  for (std::size_t l = 0; l < depth; ++l) {
    Matrix z = layers_[l].weights * activations.back();
    z.colwise() += layers_[l].bias;
    if (l + 1 < depth) z = z.cwiseMax(Scalar(0));
    activations.push_back(std::move(z));
  }
  const RowVector z_out = activations.back().row(0);
  const auto batch = static_cast<Scalar>(x.cols());

  Scalar loss = 0;
  RowVector delta(z_out.size());
  for (Eigen::Index i = 0; i < z_out.size(); ++i) {
    loss += softplus(z_out(i)) - y(i) * z_out(i);
    delta(i) = (sigmoid(z_out(i)) - y(i)) / batch;
  }
  loss /= batch;
  Scalar penalty = 0;
  for (const auto& layer : layers_) penalty += layer.weights.squaredNorm();
  loss += Scalar(0.5) * l2 * penalty;

  if (grads != nullptr) {
    grads->resize(depth);
    Matrix d = delta;
    for (std::size_t l = depth; l-- > 0;) {
      Layer& g = (*grads)[l];
      g.weights = d * activations[l].transpose() + l2 * layers_[l].weights;
      g.bias = d.rowwise().sum();
      if (l > 0) {
        Matrix back = layers_[l].weights.transpose() * d;
        // ReLU derivative: activations[l] is the post-ReLU output of layer l-1
        d = (activations[l].array() > Scalar(0)).select(back, Scalar(0));
      }
    }
  }
  return loss;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> MlpNetwork<Scalar>::flatten(const std::vector<Layer>& layers) {
  Eigen::Index total = 0;
  for (const auto& l : layers) total += l.weights.size() + l.bias.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> theta(total);
  Eigen::Index pos = 0;
  for (const auto& l : layers) {
    theta.segment(pos, l.weights.size()) = l.weights.reshaped();
    pos += l.weights.size();
    theta.segment(pos, l.bias.size()) = l.bias;
    pos += l.bias.size();
  }
  return theta;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> MlpNetwork<Scalar>::flatten() const {
  return flatten(layers_);
}

template <typename Scalar>
void MlpNetwork<Scalar>::unflatten(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& theta) {
  Eigen::Index pos = 0;
  for (auto& l : layers_) {
    l.weights.reshaped() = theta.segment(pos, l.weights.size());
    pos += l.weights.size();
    l.bias = theta.segment(pos, l.bias.size());
    pos += l.bias.size();
  }
}

template class MlpNetwork<float>;
template class MlpNetwork<double>;

MlpClassifier MlpClassifier::fit(const Eigen::MatrixXd& x, std::span<const int> y, const MlpParams& params,
                                 std::uint64_t seed) {
  if (params.width_multiplier < 1 || params.epochs < 1 || params.batch_size < 1) {
    throw invalid_argument("invalid mlp parameters");
  }
  const auto features = static_cast<std::size_t>(x.cols());
  const auto p = static_cast<std::size_t>(params.width_multiplier);
  const std::array<std::size_t, 2> hidden{p * features, (p + 1) * features};

  SplitMix64 rng(seed);
  MlpNetwork<float> net(features, hidden, rng);

  using Matrix = MlpNetwork<float>::Matrix;
  using RowVector = MlpNetwork<float>::RowVector;
  const Matrix xt = x.transpose().cast<float>();
  const auto n = static_cast<std::size_t>(x.rows());

  std::vector<MlpNetwork<float>::Layer> velocity;
  for (const auto& layer : net.layers()) {
    velocity.push_back({Matrix::Zero(layer.weights.rows(), layer.weights.cols()),
                        MlpNetwork<float>::Vector::Zero(layer.bias.size())});
  }
  std::vector<MlpNetwork<float>::Layer> grads;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  const auto lr = static_cast<float>(params.learning_rate);
  const auto mu = static_cast<float>(params.momentum);
  const auto l2 = static_cast<float>(params.l2);
  const auto batch_size = static_cast<std::size_t>(params.batch_size);
  Matrix batch;
  RowVector targets;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t size = std::min(batch_size, n - start);
      batch.resize(xt.rows(), static_cast<Eigen::Index>(size));
      targets.resize(static_cast<Eigen::Index>(size));
      for (std::size_t i = 0; i < size; ++i) {
        batch.col(static_cast<Eigen::Index>(i)) = xt.col(static_cast<Eigen::Index>(order[start + i]));
        targets(static_cast<Eigen::Index>(i)) = static_cast<float>(y[order[start + i]]);
      }
      const float loss = net.loss_and_gradient(batch, targets, l2, &grads);
      if (!std::isfinite(loss)) throw domain_error("mlp training produced a non-finite loss");
      for (std::size_t l = 0; l < grads.size(); ++l) {
        velocity[l].weights = mu * velocity[l].weights + grads[l].weights;
        velocity[l].bias = mu * velocity[l].bias + grads[l].bias;
        net.layers()[l].weights -= lr * velocity[l].weights;
        net.layers()[l].bias -= lr * velocity[l].bias;
      }
    }
  }
  return MlpClassifier(std::move(net));
}

std::vector<double> MlpClassifier::predict_scores(const Eigen::MatrixXd& x) const {
  const MlpNetwork<float>::Matrix xt = x.transpose().cast<float>();
  const auto z = network_.logits(xt);
  std::vector<double> out(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<double>(sigmoid(z(i)));
  }
  return out;
}

}  // namespace fairlens
