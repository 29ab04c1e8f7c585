#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fairlens {

/// Classifier families, in canonical (matrix row block) order.
enum class ModelKind { Logit, Mlp, Knn, Rf, Tree, Nb };

inline constexpr std::array<ModelKind, 6> kAllModelKinds{ModelKind::Logit, ModelKind::Mlp, ModelKind::Knn,
                                                         ModelKind::Rf,    ModelKind::Tree, ModelKind::Nb};

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);
/// Parses "logit,mlp" into canonical order without duplicates.
std::vector<ModelKind> parse_model_list(std::string_view csv);
std::size_t canonical_rank(ModelKind kind);

enum class DistanceMetric { Minkowski3, Euclidean, Manhattan };
std::string_view to_string(DistanceMetric metric);
DistanceMetric distance_metric_from_string(std::string_view name);

struct LogitParams {
  double c = 1.0;  // inverse regularization strength
};

struct MlpParams {
  int width_multiplier = 1;  // hidden widths P*F and (P+1)*F
  int epochs = 100;
  int batch_size = 64;
  double l2 = 0.01;
  double learning_rate = 0.01;
  double momentum = 0.9;
};

struct KnnParams {
  int neighbors = 5;
  DistanceMetric metric = DistanceMetric::Euclidean;
};

struct ForestParams {
  int estimators = 10;
  int max_depth = 10;
  int min_samples_leaf = 1;
};

struct TreeParams {
  int max_depth = 10;
  int min_samples_leaf = 1;
};

struct NbParams {};

using HyperParams = std::variant<LogitParams, MlpParams, KnnParams, ForestParams, TreeParams, NbParams>;

struct HyperDraw {
  ModelKind kind = ModelKind::Nb;
  HyperParams params = NbParams{};
};

/// Random search space:
///   logit  C ~ U(0.1, 10)
///   mlp    P ~ U{1..10}; 100 epochs, batch 64, L2 0.01
///   knn    neighbors ~ U{3..20}, metric ~ U{minkowski(p=3), euclidean, manhattan}
///   rf     estimators ~ U{10..50}, max depth ~ U{5..50}, min leaf ~ U{1..10}
///   tree   max depth ~ U{5..50}, min leaf ~ U{1..10}
///   nb     no parameters (every draw is identical)
std::vector<HyperDraw> sample_hypers(ModelKind kind, std::size_t count, std::uint64_t seed);

/// True for kinds whose draws are all identical, so a search needs one fit.
bool has_hyperparameters(ModelKind kind);

/// Fitted scorer. Implementations are immutable after training.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::vector<double> predict_scores(const Eigen::MatrixXd& x) const = 0;
};

struct TrainedModel {
  ModelKind kind = ModelKind::Nb;
  HyperDraw draw;
  std::uint64_t seed = 0;
  std::size_t feature_count = 0;
  std::shared_ptr<const Classifier> impl;

  /// Scores in [0, 1]. Throws on a feature-count mismatch.
  std::vector<double> predict_scores(const Eigen::MatrixXd& x) const;
};

/// Trains one draw. Throws for non-finite features, and for single-class
/// training data with logit, mlp and nb. knn, tree and rf accept a single
/// class (they then score every row with that class).
TrainedModel train(const HyperDraw& draw, const Eigen::MatrixXd& x, std::span<const int> y, std::uint64_t seed);

void check_training_data(const Eigen::MatrixXd& x, std::span<const int> y);
bool single_class(std::span<const int> y);

}  // namespace fairlens
