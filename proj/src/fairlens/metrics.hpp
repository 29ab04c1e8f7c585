#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace fairlens {

/// The 13 group-wise metrics, in canonical column order.
enum class Metric : std::size_t { AUC, A, BA, FPR, TPR, FNR, TNR, PPV, NPV, FDR, FOR, PPR, PPREV };

inline constexpr std::size_t kMetricCount = 13;

std::string_view metric_name(Metric m);
std::string_view metric_name(std::size_t index);
/// Throws on an unknown name.
Metric metric_from_name(std::string_view name);

/// Metric pairs that sum to one: (TPR, FNR), (TNR, FPR), (PPV, FDR), (NPV, FOR).
inline constexpr std::array<std::array<Metric, 2>, 4> kComplementPairs{{
    {Metric::TPR, Metric::FNR},
    {Metric::TNR, Metric::FPR},
    {Metric::PPV, Metric::FDR},
    {Metric::NPV, Metric::FOR},
}};

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Metric values with a per-entry flag marking values imputed because the
/// metric was undefined (zero denominator, single-class AUC, empty group).
struct MetricVector {
  std::array<double, kMetricCount> values{};
  std::array<bool, kMetricCount> imputed{};

  double operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
  bool is_imputed(Metric m) const { return imputed[static_cast<std::size_t>(m)]; }
  bool any_imputed() const;

  /// Every value imputed: AUC 0.5, the rest 0.
  static MetricVector undefined();
};

struct RocPoint {
  double threshold = 0.0;  // predictions are positive when score >= threshold
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // threshold decreasing, from (0,0) to (1,1)
  double auc = 0.5;
};

struct ThresholdChoice {
  double threshold = 0.5;
  double balanced_accuracy = 0.0;
  std::size_t candidates = 0;
  bool fallback = false;  // single-class validation data
};

/// AUC that may have been imputed for single-class data.
struct AucValue {
  double value = 0.5;
  bool imputed = false;
};

/// Epsilon used for the outermost threshold candidates.
inline constexpr double kThresholdEpsilon = 1e-6;

ConfusionCounts confusion_at_threshold(std::span<const double> scores, std::span<const int> labels, double t);

/// Rates use the counts; PPREV divides predicted positives by the group size
/// (the counts' total) and PPR by `n_total`, the whole population.
MetricVector compute_metric_vector(const ConfusionCounts& counts, AucValue auc, std::uint64_t n_total);

/// Throws a domain error when `labels` holds a single class.
RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels);

/// roc_auc with the single-class case imputed to 0.5 and flagged.
AucValue auc_or_imputed(std::span<const double> scores, std::span<const int> labels);

/// Exact balanced-accuracy maximization over the thresholds epsilon,
/// midpoints of consecutive distinct scores, and 1 - epsilon. Ties go to the
/// smallest threshold.
ThresholdChoice select_threshold(std::span<const double> scores, std::span<const int> labels);

/// Test-fold outcome for one group: counts at the fold threshold plus the raw
/// scores needed for a pooled AUC.
struct GroupTally {
  ConfusionCounts counts;
  std::vector<double> scores;
  std::vector<int> labels;
};

/// Splits scored rows by group and thresholds them at `t`.
std::vector<GroupTally> tally_groups(std::span<const double> scores, std::span<const int> labels,
                                     std::span<const int> group_of_row, std::size_t group_count, double t);

/// One MetricVector per group id, computed on that group's rows only.
std::vector<MetricVector> group_metric_vectors(std::span<const double> scores, std::span<const int> labels,
                                               std::span<const int> group_of_row, std::size_t group_count,
                                               double t, std::uint64_t n_total);

}  // namespace fairlens
