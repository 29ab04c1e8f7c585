#include <algorithm>
#include <cmath>

#include "fairlens/error.hpp"
#include "fairlens/models/knn.hpp"
#include "fairlens/models/logit.hpp"
#include "fairlens/models/mlp.hpp"
#include "fairlens/models/model.hpp"
#include "fairlens/models/nb.hpp"
#include "fairlens/models/tree.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Logit: return "logit";
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Knn: return "knn";
    case ModelKind::Rf: return "rf";
    case ModelKind::Tree: return "tree";
    case ModelKind::Nb: return "nb";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (ModelKind k : kAllModelKinds) {
    if (to_string(k) == name) return k;
  }
  throw invalid_argument("unknown model kind '" + std::string(name) + "' (expected logit, mlp, knn, rf, tree, nb)");
}

std::size_t canonical_rank(ModelKind kind) { return static_cast<std::size_t>(kind); }

std::vector<ModelKind> parse_model_list(std::string_view csv) {
  std::vector<ModelKind> kinds;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t end = std::min(csv.find(',', start), csv.size());
    std::string_view token = csv.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      const ModelKind k = model_kind_from_string(token);
      if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    }
    start = end + 1;
  }
  if (kinds.empty()) throw invalid_argument("model list is empty");
  std::sort(kinds.begin(), kinds.end(), [](ModelKind a, ModelKind b) { return canonical_rank(a) < canonical_rank(b); });
  return kinds;
}

std::string_view to_string(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::Minkowski3: return "minkowski";
    case DistanceMetric::Euclidean: return "euclidean";
    case DistanceMetric::Manhattan: return "manhattan";
  }
  return "?";
}

DistanceMetric distance_metric_from_string(std::string_view name) {
  for (auto m : {DistanceMetric::Minkowski3, DistanceMetric::Euclidean, DistanceMetric::Manhattan}) {
    if (to_string(m) == name) return m;
  }
  throw invalid_argument("unknown distance metric '" + std::string(name) + "'");
}

bool has_hyperparameters(ModelKind kind) { return kind != ModelKind::Nb; }

std::vector<HyperDraw> sample_hypers(ModelKind kind, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw invalid_argument("hyperparameter draw count must be at least 1");
  SplitMix64 rng(derive_seed({seed, static_cast<std::uint64_t>(kind), 0x6879ULL}));
  std::vector<HyperDraw> draws;
  draws.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    HyperDraw d{kind, NbParams{}};
    switch (kind) {
      case ModelKind::Logit: d.params = LogitParams{rng.uniform(0.1, 10.0)}; break;
      case ModelKind::Mlp: {
        MlpParams p;
        p.width_multiplier = static_cast<int>(rng.uniform_int(1, 10));
        d.params = p;
        break;
      }
      case ModelKind::Knn: {
        KnnParams p;
        p.neighbors = static_cast<int>(rng.uniform_int(3, 20));
        p.metric = static_cast<DistanceMetric>(rng.below(3));
        d.params = p;
        break;
      }
      case ModelKind::Rf: {
        ForestParams p;
        p.estimators = static_cast<int>(rng.uniform_int(10, 50));
        p.max_depth = static_cast<int>(rng.uniform_int(5, 50));
        p.min_samples_leaf = static_cast<int>(rng.uniform_int(1, 10));
        d.params = p;
        break;
      }
      case ModelKind::Tree: {
        TreeParams p;
        p.max_depth = static_cast<int>(rng.uniform_int(5, 50));
        p.min_samples_leaf = static_cast<int>(rng.uniform_int(1, 10));
        d.params = p;
        break;
      }
      case ModelKind::Nb: break;
    }
    draws.push_back(d);
  }
  return draws;
}

bool single_class(std::span<const int> y) {
  return std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end();
}

void check_training_data(const Eigen::MatrixXd& x, std::span<const int> y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw invalid_argument("feature/label row count mismatch");
  if (x.rows() == 0) throw invalid_argument("no training rows");
  if (!x.allFinite()) throw domain_error("training features contain non-finite values");
  for (int v : y) {
    if (v != 0 && v != 1) throw invalid_argument("training labels must be 0 or 1");
  }
}

TrainedModel train(const HyperDraw& draw, const Eigen::MatrixXd& x, std::span<const int> y, std::uint64_t seed) {
  check_training_data(x, y);
  const bool parametric = draw.kind == ModelKind::Logit || draw.kind == ModelKind::Mlp || draw.kind == ModelKind::Nb;
  if (parametric && single_class(y)) {
    throw domain_error(std::string(to_string(draw.kind)) + " needs both classes in the training data");
  }

  TrainedModel model;
  model.kind = draw.kind;
  model.draw = draw;
  model.seed = seed;
  model.feature_count = static_cast<std::size_t>(x.cols());
  const std::vector<int> labels(y.begin(), y.end());
  switch (draw.kind) {
    case ModelKind::Logit:
      model.impl = std::make_shared<LogisticRegression>(LogisticRegression::fit(x, y, std::get<LogitParams>(draw.params)));
      break;
    case ModelKind::Mlp:
      model.impl = std::make_shared<MlpClassifier>(MlpClassifier::fit(x, y, std::get<MlpParams>(draw.params), seed));
      break;
    case ModelKind::Knn:
      model.impl = std::make_shared<KNearestNeighbors>(x, labels, std::get<KnnParams>(draw.params));
      break;
    case ModelKind::Rf:
      model.impl = std::make_shared<RandomForest>(
          RandomForest::fit(x, y, RandomForest::Options{std::get<ForestParams>(draw.params), true}, seed));
      break;
    case ModelKind::Tree: {
      const auto& p = std::get<TreeParams>(draw.params);
      model.impl = std::make_shared<DecisionTree>(DecisionTree::fit(x, y, TreeOptions{p.max_depth, p.min_samples_leaf, 0}, seed));
      break;
    }
    case ModelKind::Nb:
      model.impl = std::make_shared<GaussianNaiveBayes>(GaussianNaiveBayes::fit(x, y));
      break;
  }
  return model;
}

std::vector<double> TrainedModel::predict_scores(const Eigen::MatrixXd& x) const {
  if (!impl) throw invalid_argument("model is not trained");
  if (static_cast<std::size_t>(x.cols()) != feature_count) {
    throw invalid_argument("model was trained on " + std::to_string(feature_count) + " features, got " +
                           std::to_string(x.cols()));
  }
  if (!x.allFinite()) throw domain_error("prediction features contain non-finite values");
  auto scores = impl->predict_scores(x);
  for (double& s : scores) {
    if (!std::isfinite(s)) throw domain_error("model produced a non-finite score");
    s = std::clamp(s, 0.0, 1.0);
  }
  return scores;
}

}  // namespace fairlens
