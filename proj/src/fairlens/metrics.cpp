#include "fairlens/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fairlens/error.hpp"

namespace fairlens {

namespace {

constexpr std::array<std::string_view, kMetricCount> kNames{
    "AUC", "A", "BA", "FPR", "TPR", "FNR", "TNR", "PPV", "NPV", "FDR", "FOR", "PPR", "PPREV"};

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw invalid_argument("scores and labels differ in length (" + std::to_string(scores.size()) + " vs " +
                           std::to_string(labels.size()) + ")");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw invalid_argument("labels must be 0 or 1");
  }
}

struct Ratio {
  double value;
  bool imputed;
};

Ratio ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

}  // namespace

std::string_view metric_name(Metric m) { return kNames[static_cast<std::size_t>(m)]; }

std::string_view metric_name(std::size_t index) { return kNames.at(index); }

Metric metric_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (kNames[i] == name) return static_cast<Metric>(i);
  }
  throw invalid_argument("unknown metric '" + std::string(name) + "'");
}

bool MetricVector::any_imputed() const {
  return std::any_of(imputed.begin(), imputed.end(), [](bool b) { return b; });
}

MetricVector MetricVector::undefined() {
  MetricVector v;
  v.values.fill(0.0);
  v.values[static_cast<std::size_t>(Metric::AUC)] = 0.5;
  v.imputed.fill(true);
  return v;
}

ConfusionCounts confusion_at_threshold(std::span<const double> scores, std::span<const int> labels, double t) {
  check_inputs(scores, labels);
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= t;
    if (labels[i] == 1) {
      predicted ? ++c.tp : ++c.fn;
    } else {
      predicted ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

MetricVector compute_metric_vector(const ConfusionCounts& c, AucValue auc, std::uint64_t n_total) {
  const std::uint64_t group_size = c.total();
  if (group_size == 0) throw domain_error("confusion counts are all zero");
  if (n_total < group_size) throw invalid_argument("population size is smaller than the group size");

  MetricVector v;
  auto set = [&v](Metric m, Ratio r) {
    v.values[static_cast<std::size_t>(m)] = r.value;
    v.imputed[static_cast<std::size_t>(m)] = r.imputed;
  };
  set(Metric::AUC, {auc.value, auc.imputed});
  set(Metric::A, ratio(c.tp + c.tn, group_size));
  set(Metric::TPR, ratio(c.tp, c.tp + c.fn));
  set(Metric::FNR, ratio(c.fn, c.tp + c.fn));
  set(Metric::TNR, ratio(c.tn, c.tn + c.fp));
  set(Metric::FPR, ratio(c.fp, c.tn + c.fp));
  set(Metric::PPV, ratio(c.tp, c.tp + c.fp));
  set(Metric::FDR, ratio(c.fp, c.tp + c.fp));
  set(Metric::NPV, ratio(c.tn, c.tn + c.fn));
  set(Metric::FOR, ratio(c.fn, c.tn + c.fn));
  set(Metric::PPREV, ratio(c.tp + c.fp, group_size));
  set(Metric::PPR, ratio(c.tp + c.fp, n_total));
  set(Metric::BA, {(v[Metric::TPR] + v[Metric::TNR]) / 2.0, v.is_imputed(Metric::TPR) || v.is_imputed(Metric::TNR)});
  return v;
}

RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const auto positives = static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), 1));
  const std::uint64_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) throw domain_error("AUC is undefined for single-class labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  // Twice the Mann-Whitney count: each won pair adds 2, each tied pair 1.
  std::uint64_t twice_wins = 0;
  std::uint64_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    std::uint64_t dtp = 0, dfp = 0;
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      labels[order[i]] == 1 ? ++dtp : ++dfp;
    }
    twice_wins += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
    roc.points.push_back({s, static_cast<double>(fp) / static_cast<double>(negatives),
                          static_cast<double>(tp) / static_cast<double>(positives)});
  }
  roc.auc = static_cast<double>(twice_wins) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
  return roc;
}

AucValue auc_or_imputed(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || static_cast<std::size_t>(positives) == labels.size()) return {0.5, true};
  return {roc_auc(scores, labels).auc, false};
}

ThresholdChoice select_threshold(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const auto positives = static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), 1));
  const std::uint64_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) return {0.5, 0.5, 0, true};

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // below_pos[i] / below_neg[i]: class counts among the i lowest scores.
  std::vector<double> sorted(scores.size());
  std::vector<std::uint64_t> below_pos(scores.size() + 1, 0), below_neg(scores.size() + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted[i] = scores[order[i]];
    below_pos[i + 1] = below_pos[i] + (labels[order[i]] == 1 ? 1 : 0);
    below_neg[i + 1] = below_neg[i] + (labels[order[i]] == 1 ? 0 : 1);
  }

  std::vector<double> candidates{kThresholdEpsilon};
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i] != sorted[i + 1]) candidates.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  }
  candidates.push_back(1.0 - kThresholdEpsilon);
  std::sort(candidates.begin(), candidates.end());

  // BA * 2PN = TP*N + TN*P is an exact integer, so ties compare exactly.
  ThresholdChoice best;
  best.candidates = candidates.size();
  std::uint64_t best_key = 0;
  bool have = false;
  for (double t : candidates) {
    const auto below = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    const std::uint64_t tp = positives - below_pos[below];
    const std::uint64_t tn = below_neg[below];
    const std::uint64_t key = tp * negatives + tn * positives;
    if (!have || key > best_key) {
      have = true;
      best_key = key;
      best.threshold = t;
      best.balanced_accuracy = (static_cast<double>(tp) / static_cast<double>(positives) +
                                static_cast<double>(tn) / static_cast<double>(negatives)) /
                               2.0;
    }
  }
  return best;
}

std::vector<GroupTally> tally_groups(std::span<const double> scores, std::span<const int> labels,
                                     std::span<const int> group_of_row, std::size_t group_count, double t) {
  check_inputs(scores, labels);
  if (group_of_row.size() != scores.size()) throw invalid_argument("group assignment length mismatch");
  std::vector<GroupTally> tallies(group_count);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int g = group_of_row[i];
    if (g < 0 || static_cast<std::size_t>(g) >= group_count) {
      throw invalid_argument("row " + std::to_string(i) + " has no valid group");
    }
    GroupTally& tally = tallies[static_cast<std::size_t>(g)];
    const bool predicted = scores[i] >= t;
    if (labels[i] == 1) {
      predicted ? ++tally.counts.tp : ++tally.counts.fn;
    } else {
      predicted ? ++tally.counts.fp : ++tally.counts.tn;
    }
    tally.scores.push_back(scores[i]);
    tally.labels.push_back(labels[i]);
  }
  return tallies;
}

std::vector<MetricVector> group_metric_vectors(std::span<const double> scores, std::span<const int> labels,
                                               std::span<const int> group_of_row, std::size_t group_count,
                                               double t, std::uint64_t n_total) {
  const auto tallies = tally_groups(scores, labels, group_of_row, group_count, t);
  std::vector<MetricVector> out;
  out.reserve(group_count);
  for (const auto& tally : tallies) {
    if (tally.counts.total() == 0) {
      out.push_back(MetricVector::undefined());
    } else {
      out.push_back(compute_metric_vector(tally.counts, auc_or_imputed(tally.scores, tally.labels), n_total));
    }
  }
  return out;
}

}  // namespace fairlens
