#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fairlens {

enum class DistanceAxis { Columns, Rows };

std::string to_string(DistanceAxis axis);
DistanceAxis distance_axis_from_string(const std::string& name);

/// Condensed pairwise distances (upper triangle, row by row, as in
/// scipy.spatial.distance.squareform) between the items along one axis.
struct DistanceVector {
  DistanceAxis axis = DistanceAxis::Columns;
  std::vector<double> values;
  std::vector<std::string> labels;
  /// Items whose entries are constant, so Pearson correlation is undefined.
  std::vector<bool> constant_items;

  std::size_t item_count() const { return labels.size(); }
  double at(std::size_t i, std::size_t j) const;
};

/// Position of pair (i, j), i != j, in a condensed vector over n items.
std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j);

/// Pearson correlation. Returns 0 when either input is constant.
double pearson(std::span<const double> a, std::span<const double> b);

/// distance = 1 - rho with signed Pearson rho, so perfectly anti-correlated
/// items (a metric and its complement) are 2 apart. A constant item is at
/// distance 1 from everything except an identical constant item (distance 0).
DistanceVector correlation_distance(const Eigen::MatrixXd& matrix, DistanceAxis axis,
                                    std::vector<std::string> labels);

/// One agglomeration step. Leaves are nodes 0..n-1; merge i creates node n+i.
/// left < right always.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;
  friend bool operator==(const Merge&, const Merge&) = default;
};

struct Linkage {
  std::size_t leaves = 0;
  std::vector<Merge> merges;
};

/// UPGMA (average linkage). Cluster-to-cluster distance is the mean of all
/// member-pair distances, tracked as exact running sums. Among equally close
/// pairs the one with the smallest (left id, right id) merges first.
Linkage upgma(const DistanceVector& d);
Linkage upgma(std::span<const double> condensed, std::size_t n);

/// Flat clusters after undoing the k-1 last merges. Cluster ids are numbered
/// by the smallest leaf they contain.
std::vector<std::size_t> cut_clusters(const Linkage& linkage, std::size_t k);

/// Display order of the leaves: depth-first, smaller subtree first.
std::vector<std::size_t> leaf_order(const Linkage& linkage);

/// Leaves under every node (leaf ids, ascending), indexed by node id.
std::vector<std::vector<std::size_t>> node_members(const Linkage& linkage);

}  // namespace fairlens
