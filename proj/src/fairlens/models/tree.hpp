#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "fairlens/models/model.hpp"

namespace fairlens {

struct TreeOptions {
  int max_depth = 10;
  int min_samples_leaf = 1;
  /// Features examined per split; 0 means all of them.
  int max_features = 0;
};

/// CART classification tree with Gini impurity. Rows go left when
/// x[feature] <= threshold; thresholds are midpoints between consecutive
/// distinct training values. A leaf scores the positive fraction of the
/// training rows that reached it.
class DecisionTree final : public Classifier {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // positive fraction
  };

  /// `rows` selects (possibly repeated) training rows; empty means all rows once.
  static DecisionTree fit(const Eigen::MatrixXd& x, std::span<const int> y, const TreeOptions& options,
                          std::uint64_t seed, std::span<const std::size_t> rows = {});

  std::vector<double> predict_scores(const Eigen::MatrixXd& x) const override;
  double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  int depth() const;

 private:
  std::vector<Node> nodes_;
};

/// Bagged CART trees, sqrt(F) candidate features per split. The score is the
/// mean of the per-tree leaf fractions.
class RandomForest final : public Classifier {
 public:
  struct Options {
    ForestParams params;
    bool bootstrap = true;
  };

  explicit RandomForest(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {}

  static RandomForest fit(const Eigen::MatrixXd& x, std::span<const int> y, const Options& options,
                          std::uint64_t seed);

  /// Seed handed to tree `index` of a forest trained with `seed`.
  static std::uint64_t tree_seed(std::uint64_t seed, std::size_t index);
  static int default_max_features(Eigen::Index features);

  std::vector<double> predict_scores(const Eigen::MatrixXd& x) const override;
  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
};

}  // namespace fairlens
