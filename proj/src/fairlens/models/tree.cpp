#include "fairlens/models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {

namespace {

// n * gini for a node with `pos` positives out of `n`.
double weighted_gini(double n, double pos) {
  if (n <= 0) return 0.0;
  return n - (pos * pos + (n - pos) * (n - pos)) / n;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class Builder {
 public:
  Builder(const Eigen::MatrixXd& x, std::span<const int> y, const TreeOptions& options, std::uint64_t seed)
      : x_(x), y_(y), options_(options), rng_(seed) {
    features_.resize(static_cast<std::size_t>(x.cols()));
    std::iota(features_.begin(), features_.end(), 0);
  }

  std::vector<DecisionTree::Node> build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double pos = 0;
    for (std::size_t r : rows) pos += y_[r];
    const auto n = static_cast<double>(rows.size());
    nodes_[static_cast<std::size_t>(id)].value = n > 0 ? pos / n : 0.0;

    const auto min_leaf = static_cast<std::size_t>(std::max(1, options_.min_samples_leaf));
    if (depth >= options_.max_depth || pos == 0 || pos == n || rows.size() < 2 * min_leaf) return id;

    const Split split = best_split(rows, pos, min_leaf);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (x_(static_cast<Eigen::Index>(r), split.feature) <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int rr = grow(std::move(right), depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = rr;
    return id;
  }

  Split best_split(const std::vector<std::size_t>& rows, double pos_total, std::size_t min_leaf) {
    const std::size_t total_features = features_.size();
    std::size_t candidates = total_features;
    if (options_.max_features > 0) {
      candidates = std::min<std::size_t>(total_features, static_cast<std::size_t>(options_.max_features));
      // partial Fisher-Yates: the first `candidates` entries are a uniform sample
      for (std::size_t i = 0; i < candidates; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng_.below(total_features - i));
        std::swap(features_[i], features_[j]);
      }
    }

    Split best;
    best.impurity = weighted_gini(static_cast<double>(rows.size()), pos_total);
    bool found = false;
    const auto n = static_cast<double>(rows.size());
    std::vector<std::pair<double, int>> column(rows.size());
    for (std::size_t fi = 0; fi < candidates; ++fi) {
      const int f = features_[fi];
      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {x_(static_cast<Eigen::Index>(rows[i]), f), y_[rows[i]]};
      }
      std::sort(column.begin(), column.end());
      double left_pos = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        left_pos += column[i].second;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t left_n = i + 1;
        if (left_n < min_leaf || rows.size() - left_n < min_leaf) continue;
        const auto ln = static_cast<double>(left_n);
        const double impurity = weighted_gini(ln, left_pos) + weighted_gini(n - ln, pos_total - left_pos);
        if (!found || impurity < best.impurity) {
          found = true;
          best = {f, 0.5 * (column[i].first + column[i + 1].first), impurity};
        }
      }
    }
    if (!found) best.feature = -1;
    return best;
  }

  const Eigen::MatrixXd& x_;
  std::span<const int> y_;
  TreeOptions options_;
  SplitMix64 rng_;
  std::vector<int> features_;
  std::vector<DecisionTree::Node> nodes_;
};

}  // namespace

DecisionTree DecisionTree::fit(const Eigen::MatrixXd& x, std::span<const int> y, const TreeOptions& options,
                               std::uint64_t seed, std::span<const std::size_t> rows) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw invalid_argument("tree: row/label count mismatch");
  if (x.rows() == 0) throw invalid_argument("tree: no training rows");
  if (options.max_depth < 0 || options.min_samples_leaf < 1) throw invalid_argument("tree: invalid options");
  std::vector<std::size_t> selected(rows.begin(), rows.end());
  if (selected.empty()) {
    selected.resize(y.size());
    std::iota(selected.begin(), selected.end(), 0);
  }
  DecisionTree tree;
  tree.nodes_ = Builder(x, y, options, seed).build(std::move(selected));
  return tree;
}

double DecisionTree::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  int id = 0;
  while (nodes_[static_cast<std::size_t>(id)].feature >= 0) {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    id = row(node.feature) <= node.threshold ? node.left : node.right;
  }
  return nodes_[static_cast<std::size_t>(id)].value;
}

std::vector<double> DecisionTree::predict_scores(const Eigen::MatrixXd& x) const {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[static_cast<std::size_t>(r)] = predict_row(x.row(r));
  return out;
}

int DecisionTree::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int max_depth = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    max_depth = std::max(max_depth, depth[i]);
    if (nodes_[i].feature >= 0) {
      depth[static_cast<std::size_t>(nodes_[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes_[i].right)] = depth[i] + 1;
    }
  }
  return max_depth;
}

std::uint64_t RandomForest::tree_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed({seed, 0x7265ULL, index});
}

int RandomForest::default_max_features(Eigen::Index features) {
  return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(features)))));
}

RandomForest RandomForest::fit(const Eigen::MatrixXd& x, std::span<const int> y, const Options& options,
                               std::uint64_t seed) {
  if (options.params.estimators < 1) throw invalid_argument("random forest needs at least one tree");
  const TreeOptions tree_options{options.params.max_depth, options.params.min_samples_leaf,
                                 default_max_features(x.cols())};
  const std::size_t n = y.size();
  std::vector<DecisionTree> trees;
  for (std::size_t t = 0; t < static_cast<std::size_t>(options.params.estimators); ++t) {
    const std::uint64_t s = tree_seed(seed, t);
    std::vector<std::size_t> rows;
    if (options.bootstrap) {
      SplitMix64 sampler(derive_seed({s, 0x626fULL}));
      rows.resize(n);
      for (auto& r : rows) r = static_cast<std::size_t>(sampler.below(n));
    }
    trees.push_back(DecisionTree::fit(x, y, tree_options, s, rows));
  }
  return RandomForest(std::move(trees));
}

std::vector<double> RandomForest::predict_scores(const Eigen::MatrixXd& x) const {
  std::vector<double> out(static_cast<std::size_t>(x.rows()), 0.0);
  for (const auto& tree : trees_) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) out[static_cast<std::size_t>(r)] += tree.predict_row(x.row(r));
  }
  for (double& v : out) v /= static_cast<double>(trees_.size());
  return out;
}

}  // namespace fairlens
