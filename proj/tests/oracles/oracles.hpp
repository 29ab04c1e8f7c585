#pragma once

// Reference implementations used only to check the library. Each one is
// written the slow, obvious way and shares no code with src/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

/// Mann-Whitney pair counting: P(score+ > score-) + P(tie) / 2.
inline double pair_count_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

inline double balanced_accuracy_at(const std::vector<double>& scores, const std::vector<int>& labels, double t) {
  double tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pos = scores[i] >= t;
    if (labels[i] == 1) (pos ? tp : fn) += 1;
    else (pos ? fp : tn) += 1;
  }
  return (tp / (tp + fn) + tn / (tn + fp)) / 2.0;
}

/// Max balanced accuracy over thresholds i / (points - 1), i = 0..points-1.
inline double sweep_best_balanced_accuracy(const std::vector<double>& scores, const std::vector<int>& labels,
                                           std::size_t points = 10001) {
  double best = -1.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    best = std::max(best, balanced_accuracy_at(scores, labels, t));
  }
  return best;
}

struct NaiveMerge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;
  std::vector<std::size_t> members;  // sorted leaves of the new cluster
};

/// Average linkage recomputed from scratch at every step: the distance
/// between two clusters is the mean over all member pairs. Clusters are
/// numbered like scipy (leaves 0..n-1, merge k creates n+k); among equal
/// distances the pair with the smallest (lower id, higher id) merges first.
inline std::vector<NaiveMerge> naive_upgma(const std::vector<double>& condensed, std::size_t n) {
  auto dist = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return condensed[n * a - a * (a + 1) / 2 + (b - a - 1)];
  };
  struct Cluster {
    std::size_t id;
    std::vector<std::size_t> members;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, {i}});
  std::vector<NaiveMerge> out;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    std::pair<std::size_t, std::size_t> best_key{0, 0};
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        double sum = 0.0;
        for (const auto a : active[i].members) {
          for (const auto b : active[j].members) sum += dist(a, b);
        }
        const double d =
            sum / static_cast<double>(active[i].members.size() * active[j].members.size());
        const std::pair<std::size_t, std::size_t> key{std::min(active[i].id, active[j].id),
                                                      std::max(active[i].id, active[j].id)};
        if (d < best || (d == best && key < best_key)) {
          best = d;
          bi = i;
          bj = j;
          best_key = key;
        }
      }
    }
    NaiveMerge m;
    m.left = best_key.first;
    m.right = best_key.second;
    m.height = best;
    m.members = active[bi].members;
    m.members.insert(m.members.end(), active[bj].members.begin(), active[bj].members.end());
    std::sort(m.members.begin(), m.members.end());
    m.size = m.members.size();
    out.push_back(m);
    Cluster merged{n + step, m.members};
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
    active.push_back(std::move(merged));
  }
  return out;
}

/// Leaf partition after the first `merges` merges, as a set of sorted member lists.
inline std::set<std::vector<std::size_t>> naive_partition(const std::vector<NaiveMerge>& merges, std::size_t n,
                                                          std::size_t applied) {
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[i] = i;
  for (std::size_t k = 0; k < applied; ++k) {
    for (const auto leaf : merges[k].members) owner[leaf] = n + k;
  }
  std::vector<std::vector<std::size_t>> groups(2 * n);
  for (std::size_t i = 0; i < n; ++i) groups[owner[i]].push_back(i);
  std::set<std::vector<std::size_t>> out;
  for (auto& g : groups) {
    if (!g.empty()) out.insert(g);
  }
  return out;
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix stored row-major
/// (dim x dim). Returns eigenvalues in descending order; `vectors`, when
/// non-null, receives the matching unit eigenvectors as rows.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t dim,
                                              std::vector<std::vector<double>>* vectors = nullptr) {
  std::vector<double> v(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) v[i * dim + i] = 1.0;
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * dim + c]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        total += at(r, c) * at(r, c);
        if (r != c) off += at(r, c) * at(r, c);
      }
    }
    if (off <= 1e-30 * std::max(total, 1e-300)) break;
    for (std::size_t p = 0; p < dim; ++p) {
      for (std::size_t q = p + 1; q < dim; ++q) {
        if (at(p, q) == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < dim; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < dim; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < dim; ++k) {
          const double vkp = v[k * dim + p], vkq = v[k * dim + q];
          v[k * dim + p] = c * vkp - s * vkq;
          v[k * dim + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(dim);
  for (std::size_t i = 0; i < dim; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return at(x, x) > at(y, y); });
  std::vector<double> values;
  if (vectors != nullptr) vectors->clear();
  for (const auto i : order) {
    values.push_back(at(i, i));
    if (vectors != nullptr) {
      std::vector<double> col(dim);
      for (std::size_t k = 0; k < dim; ++k) col[k] = v[k * dim + i];
      vectors->push_back(std::move(col));
    }
  }
  return values;
}

/// Explained-variance ratios from the eigenvalues of the centered covariance
/// of a row-major rows x cols matrix.
inline std::vector<double> covariance_ratios(const std::vector<double>& m, std::size_t rows, std::size_t cols) {
  std::vector<double> mean(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) mean[c] += m[r * cols + c];
  }
  for (auto& x : mean) x /= static_cast<double>(rows);
  std::vector<double> cov(cols * cols, 0.0);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += (m[r * cols + i] - mean[i]) * (m[r * cols + j] - mean[j]);
      cov[i * cols + j] = s / static_cast<double>(rows - 1);
    }
  }
  std::vector<double> eig = jacobi_eigenvalues(cov, cols);
  double total = 0.0;
  for (const double e : eig) total += std::max(e, 0.0);
  for (auto& e : eig) e = std::max(e, 0.0) / total;
  return eig;
}

}  // namespace oracle
