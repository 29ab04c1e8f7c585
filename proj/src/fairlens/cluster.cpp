#include "fairlens/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairlens/error.hpp"

namespace fairlens {

std::string to_string(DistanceAxis axis) { return axis == DistanceAxis::Columns ? "columns" : "rows"; }

DistanceAxis distance_axis_from_string(const std::string& name) {
  if (name == "columns") return DistanceAxis::Columns;
  if (name == "rows") return DistanceAxis::Rows;
  throw invalid_argument("unknown distance axis '" + name + "'");
}

std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return n * i - i * (i + 1) / 2 + (j - i - 1);
}

double DistanceVector::at(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  return values.at(condensed_index(item_count(), i, j));
}

namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw invalid_argument("pearson: length mismatch");
  if (a.size() < 2) throw invalid_argument("pearson: needs at least two entries");
  if (is_constant(a) || is_constant(b)) return 0.0;
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

DistanceVector correlation_distance(const Eigen::MatrixXd& matrix, DistanceAxis axis,
                                    std::vector<std::string> labels) {
  // Items are stored as rows of `items`.
  const Eigen::MatrixXd items = axis == DistanceAxis::Columns ? Eigen::MatrixXd(matrix.transpose()) : matrix;
  const auto n = static_cast<std::size_t>(items.rows());
  if (n < 2) throw invalid_argument("correlation distance needs at least two items along the " + to_string(axis));
  if (items.cols() < 2) throw invalid_argument("correlation distance needs at least two entries per item");
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw invalid_argument("correlation distance: label count mismatch");
  if (!items.allFinite()) throw domain_error("correlation distance: non-finite matrix entry");

  DistanceVector d;
  d.axis = axis;
  d.labels = std::move(labels);
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].resize(static_cast<std::size_t>(items.cols()));
    Eigen::Map<Eigen::RowVectorXd>(rows[i].data(), items.cols()) = items.row(static_cast<Eigen::Index>(i));
    d.constant_items.push_back(is_constant(rows[i]));
  }
  d.values.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d.constant_items[i] || d.constant_items[j]) {
        d.values.push_back(rows[i] == rows[j] ? 0.0 : 1.0);
      } else {
        d.values.push_back(1.0 - pearson(rows[i], rows[j]));
      }
    }
  }
  return d;
}

Linkage upgma(const DistanceVector& d) { return upgma(d.values, d.item_count()); }

Linkage upgma(std::span<const double> condensed, std::size_t n) {
  if (condensed.size() != n * (n - 1) / 2) throw invalid_argument("condensed distance vector has the wrong length");
  for (double v : condensed) {
    if (!std::isfinite(v)) throw domain_error("distance vector contains a non-finite entry");
  }
  Linkage linkage;
  linkage.leaves = n;
  if (n < 2) return linkage;

  // Slot s holds cluster id[s]; sums(a, b) is the total distance over member
  // pairs, so the UPGMA distance is sums / (size_a * size_b) and merging two
  // clusters just adds their rows.
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sums(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = condensed[condensed_index(n, i, j)];
      sums(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = condensed[condensed_index(n, i, j)];
    }
  }
  std::vector<std::size_t> id(n), size(n, 1);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = 0, best_b = 0;
    double best = 0.0;
    bool have = false;
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const std::size_t a = active[x], b = active[y];
        const double avg = sums(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) /
                           static_cast<double>(size[a] * size[b]);
        const auto key = std::minmax(id[a], id[b]);
        if (!have || avg < best || (avg == best && key < std::minmax(id[best_a], id[best_b]))) {
          have = true;
          best = avg;
          best_a = a;
          best_b = b;
        }
      }
    }
    const auto [lo, hi] = std::minmax(id[best_a], id[best_b]);
    linkage.merges.push_back({lo, hi, best, size[best_a] + size[best_b]});

    // merged cluster lives in slot best_a
    for (std::size_t c : active) {
      if (c == best_a || c == best_b) continue;
      const double s = sums(static_cast<Eigen::Index>(best_a), static_cast<Eigen::Index>(c)) +
                       sums(static_cast<Eigen::Index>(best_b), static_cast<Eigen::Index>(c));
      sums(static_cast<Eigen::Index>(best_a), static_cast<Eigen::Index>(c)) = s;
      sums(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(best_a)) = s;
    }
    size[best_a] += size[best_b];
    id[best_a] = n + step;
    active.erase(std::find(active.begin(), active.end(), best_b));
  }
  return linkage;
}

std::vector<std::vector<std::size_t>> node_members(const Linkage& linkage) {
  const std::size_t n = linkage.leaves;
  std::vector<std::vector<std::size_t>> members(n + linkage.merges.size());
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  for (std::size_t m = 0; m < linkage.merges.size(); ++m) {
    auto& out = members[n + m];
    const auto& l = members.at(linkage.merges[m].left);
    const auto& r = members.at(linkage.merges[m].right);
    out.reserve(l.size() + r.size());
    std::merge(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(out));
  }
  return members;
}

std::vector<std::size_t> cut_clusters(const Linkage& linkage, std::size_t k) {
  const std::size_t n = linkage.leaves;
  if (k < 1 || k > n) {
    throw invalid_argument("cannot cut " + std::to_string(n) + " leaves into " + std::to_string(k) + " clusters");
  }
  std::vector<std::size_t> parent(n + linkage.merges.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t m = 0; m + k < n; ++m) {
    parent[find(linkage.merges[m].left)] = n + m;
    parent[find(linkage.merges[m].right)] = n + m;
  }
  std::vector<std::size_t> assignment(n);
  std::vector<std::size_t> root_label(parent.size(), static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const std::size_t root = find(leaf);
    if (root_label[root] == static_cast<std::size_t>(-1)) root_label[root] = next++;
    assignment[leaf] = root_label[root];
  }
  return assignment;
}

std::vector<std::size_t> leaf_order(const Linkage& linkage) {
  const std::size_t n = linkage.leaves;
  if (n == 0) return {};
  if (linkage.merges.empty()) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    return order;
  }
  auto size_of = [&](std::size_t node) { return node < n ? std::size_t{1} : linkage.merges[node - n].size; };
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{n + linkage.merges.size() - 1};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (node < n) {
      order.push_back(node);
      continue;
    }
    const Merge& m = linkage.merges[node - n];
    std::size_t first = m.left, second = m.right;
    if (size_of(second) < size_of(first)) std::swap(first, second);
    stack.push_back(second);
    stack.push_back(first);
  }
  return order;
}

}  // namespace fairlens
