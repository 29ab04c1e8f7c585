// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 255).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fairlens/bundle.hpp"
#include "fairlens/cluster.hpp"
#include "fairlens/config.hpp"
#include "fairlens/fairmatrix.hpp"
#include "fairlens/io.hpp"
#include "fairlens/metrics.hpp"
#include "fairlens/pca.hpp"
#include "fairlens/pipeline.hpp"
#include "fairlens/rng.hpp"
#include "fairlens/robustness.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace fairlens;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Accumulates the first few reasons for failure.
class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  std::size_t failures() const { return failures_; }
  std::string notes() const {
    return failures_ > 3 ? notes_ + "; +" + std::to_string(failures_ - 3) + " more" : notes_;
  }

 private:
  std::size_t failures_ = 0;
  std::string notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- 1 -------------------------------------------------------------------

Outcome metric_identities() {
  const auto start = Clock::now();
  SplitMix64 rng(20240101);
  Checker c;
  std::size_t checked = 0;
  for (std::size_t draw = 0; checked < 1000; ++draw) {
    // Zero cells are common so that undefined denominators are exercised.
    auto cell = [&] { return rng.below(4) == 0 ? 0 : rng.below(1000); };
    const ConfusionCounts k{cell(), cell(), cell(), cell()};
    if (k.total() == 0) continue;
    const auto v = compute_metric_vector(k, {0.5, false}, k.total());
    const double tp = static_cast<double>(k.tp), fp = static_cast<double>(k.fp), tn = static_cast<double>(k.tn),
                 fn = static_cast<double>(k.fn);
    const std::string at = "draw " + std::to_string(draw);
    if (tp + fn > 0) c.require(std::fabs(v[Metric::TPR] + v[Metric::FNR] - 1.0) <= 1e-12, at + " TPR+FNR");
    if (tn + fp > 0) c.require(std::fabs(v[Metric::TNR] + v[Metric::FPR] - 1.0) <= 1e-12, at + " TNR+FPR");
    if (tp + fp > 0) c.require(std::fabs(v[Metric::PPV] + v[Metric::FDR] - 1.0) <= 1e-12, at + " PPV+FDR");
    if (tn + fn > 0) c.require(std::fabs(v[Metric::NPV] + v[Metric::FOR] - 1.0) <= 1e-12, at + " NPV+FOR");
    if (tp + fn > 0 && tn + fp > 0) {
      c.require(std::fabs(v[Metric::BA] - (v[Metric::TPR] + v[Metric::TNR]) / 2.0) <= 1e-12, at + " BA");
    }
    c.require(std::fabs(v[Metric::A] - (tp + tn) / (tp + fp + tn + fn)) <= 1e-12, at + " A");
    ++checked;
  }
  const double t = seconds_since(start);
  c.require(t < 1.0, "runtime " + fmt("%.3f s", t));
  return {c.failures() == 0, std::to_string(checked) + " draws, " + fmt("%.3f s", t) +
                                 (c.failures() ? "; " + c.notes() : "")};
}

// ---- 2 -------------------------------------------------------------------

Outcome auc_oracle() {
  const auto start = Clock::now();
  SplitMix64 rng(2);
  Checker c;
  double worst = 0.0;
  std::size_t tied = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + rng.below(499);
    const bool coarse = inst % 2 == 0;  // few distinct values, many ties
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = coarse ? static_cast<double>(rng.below(11)) / 10.0 : rng.uniform01();
      y[i] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    std::set<double> distinct(s.begin(), s.end());
    tied += distinct.size() < n;
    const double got = roc_auc(s, y).auc;
    const double want = oracle::pair_count_auc(s, y);
    worst = std::max(worst, std::fabs(got - want));
    c.require(std::fabs(got - want) <= 1e-12, "instance " + std::to_string(inst) + fmt(" off by %.3g", got - want));
  }
  const double t = seconds_since(start);
  c.require(t < 10.0, "runtime " + fmt("%.2f s", t));
  return {c.failures() == 0, "200 instances (" + std::to_string(tied) + " with ties), max |diff| " +
                                 fmt("%.2g", worst) + ", " + fmt("%.2f s", t) + (c.failures() ? "; " + c.notes() : "")};
}

// ---- 3 -------------------------------------------------------------------

Outcome upgma_oracle() {
  const auto start = Clock::now();
  SplitMix64 rng(3);
  Checker c;
  std::size_t with_ties = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + rng.below(11);
    const bool integer = inst % 2 == 0;  // small integer distances force exact ties
    std::vector<double> d(n * (n - 1) / 2);
    for (auto& v : d) v = integer ? static_cast<double>(1 + rng.below(4)) : rng.uniform(0.0, 2.0);
    with_ties += std::set<double>(d.begin(), d.end()).size() < d.size();
    const Linkage fast = upgma(d, n);
    const auto slow = oracle::naive_upgma(d, n);
    const std::string at = "instance " + std::to_string(inst);
    if (fast.merges.size() != slow.size()) {
      c.require(false, at + " merge count");
      continue;
    }
    for (std::size_t k = 0; k < slow.size(); ++k) {
      c.require(std::fabs(fast.merges[k].height - slow[k].height) <= 1e-12, at + " height " + std::to_string(k));
      c.require(fast.merges[k].left == slow[k].left && fast.merges[k].right == slow[k].right &&
                    fast.merges[k].size == slow[k].size,
                at + " merge " + std::to_string(k));
    }
    const auto members = node_members(fast);
    for (std::size_t k = 0; k < slow.size(); ++k) {
      c.require(members[n + k] == slow[k].members, at + " members of node " + std::to_string(n + k));
    }
  }
  const double t = seconds_since(start);
  c.require(t < 10.0, "runtime " + fmt("%.2f s", t));
  return {c.failures() == 0, "200 instances (" + std::to_string(with_ties) + " with tied distances), " +
                                 fmt("%.2f s", t) + (c.failures() ? "; " + c.notes() : "")};
}

// ---- 4 -------------------------------------------------------------------

Outcome pca_oracle() {
  const auto start = Clock::now();
  SplitMix64 rng(4);
  Checker c;
  double worst_ratio = 0.0, worst_ortho = 0.0, worst_conservation = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t rows = 2 + rng.below(9);
    const std::size_t cols = 2 + rng.below(12);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::vector<double> flat(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < cols; ++j) {
        flat[r * cols + j] = rng.uniform01();
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = flat[r * cols + j];
      }
    }
    const std::size_t k = std::min(rows - 1, cols);  // full rank of the centered matrix
    const PcaModel p = fit_pca(m, k);
    const auto ratios = oracle::covariance_ratios(flat, rows, cols);
    for (std::size_t i = 0; i < k; ++i) {
      worst_ratio = std::max(worst_ratio, std::fabs(p.explained_variance_ratios(static_cast<Eigen::Index>(i)) - ratios[i]));
    }
    const Eigen::MatrixXd gram = p.components * p.components.transpose();
    worst_ortho = std::max(worst_ortho, (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd scores = project(m, p);
    const Eigen::RowVectorXd mean = m.colwise().mean();
    const double total = (m.rowwise() - mean).squaredNorm() / static_cast<double>(rows);
    const double captured = scores.squaredNorm() / static_cast<double>(rows);
    worst_conservation = std::max(worst_conservation, std::fabs(total - captured));
  }
  c.require(worst_ratio <= 1e-9, fmt("ratio error %.3g", worst_ratio));
  c.require(worst_ortho <= 1e-9, fmt("orthonormality error %.3g", worst_ortho));
  c.require(worst_conservation <= 1e-9, fmt("variance conservation error %.3g", worst_conservation));
  const double t = seconds_since(start);
  c.require(t < 10.0, "runtime " + fmt("%.2f s", t));
  return {c.failures() == 0, "200 matrices up to 10x13; max errors ratio " + fmt("%.2g", worst_ratio) + ", ortho " +
                                 fmt("%.2g", worst_ortho) + ", conservation " + fmt("%.2g", worst_conservation) + ", " +
                                 fmt("%.2f s", t) + (c.failures() ? "; " + c.notes() : "")};
}

// ---- 5 -------------------------------------------------------------------

Outcome threshold_exhaustiveness() {
  const auto start = Clock::now();
  SplitMix64 rng(5);
  Checker c;
  double worst = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + rng.below(299);
    std::vector<double> s(n);
    std::vector<int> y(n);
    // Scores on a 1e-3 grid: the 1e-4 sweep then visits every gap between
    // consecutive distinct scores, so both searches see the same partitions.
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(1001)) / 1000.0;
      y[i] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    const auto choice = select_threshold(s, y);
    const double sweep = oracle::sweep_best_balanced_accuracy(s, y, 10001);
    worst = std::max(worst, std::fabs(choice.balanced_accuracy - sweep));
    c.require(std::fabs(choice.balanced_accuracy - sweep) <= 1e-12,
              "instance " + std::to_string(inst) + fmt(" differs by %.3g", choice.balanced_accuracy - sweep));
    c.require(std::fabs(oracle::balanced_accuracy_at(s, y, choice.threshold) - choice.balanced_accuracy) <= 1e-12,
              "instance " + std::to_string(inst) + " reported BA does not match its threshold");
  }
  const double t = seconds_since(start);
  return {c.failures() == 0, "200 validation sets, max |diff| " + fmt("%.2g", worst) + ", " + fmt("%.2f s", t) +
                                 (c.failures() ? "; " + c.notes() : "")};
}

// ---- end-to-end ------------------------------------------------------------

struct EndToEnd {
  bool available = false;
  std::string error;
  AuditBundle first;
  AuditBundle second;
  double first_seconds = 0.0;
  fs::path first_dir;
  fs::path second_dir;
};

RunConfig compas_config(const fs::path& configs) {
  RunConfig config = desk_scale_defaults();
  config.datasets = {load_dataset_spec(configs / "compas.dataset.json")};
  config.plan.k = 5;
  config.plan.seeds = FoldPlan::seed_range(3);
  config.search_draws = 10;
  config.models = {ModelKind::Logit, ModelKind::Mlp};
  config.jobs = std::max(1u, std::thread::hardware_concurrency());
  config.validate();
  return config;
}

EndToEnd run_end_to_end(const fs::path& configs, const fs::path& scratch) {
  EndToEnd e;
  try {
    const RunConfig config = compas_config(configs);
    if (!fs::exists(config.datasets[0].source_path)) {
      e.error = "COMPAS data not found at " + config.datasets[0].source_path.string();
      return e;
    }
    e.first_dir = scratch / "run1";
    e.second_dir = scratch / "run2";
    fs::remove_all(scratch);
    auto start = Clock::now();
    e.first = run_pipeline(config);
    e.first_seconds = seconds_since(start);
    write_outputs(e.first, e.first_dir);
    std::fprintf(stderr, "end-to-end run 1: %.1f s\n", e.first_seconds);
    start = Clock::now();
    e.second = run_pipeline(config);
    write_outputs(e.second, e.second_dir);
    std::fprintf(stderr, "end-to-end run 2: %.1f s\n", seconds_since(start));
    e.available = true;
  } catch (const std::exception& ex) {
    e.error = ex.what();
  }
  return e;
}

// ---- 6 -------------------------------------------------------------------

Outcome complement_variances(const EndToEnd& e) {
  if (!e.available) return {false, e.error};
  Checker c;
  double worst = 0.0;
  std::size_t matrices = 0;
  for (const auto* bundle : {&e.first, &e.second}) {
    for (const auto& cond : bundle->conditions) {
      ++matrices;
      // Recomputed here from the stored values, not read back from the record.
      const Eigen::VectorXd var = column_variances(cond.matrix.values);
      for (const auto& pair : kComplementPairs) {
        const double d = std::fabs(var(static_cast<Eigen::Index>(pair[0])) - var(static_cast<Eigen::Index>(pair[1])));
        worst = std::max(worst, d);
        c.require(d <= 1e-12, cond.label() + " seed " + std::to_string(cond.seed) + " " +
                                  std::string(metric_name(pair[0])) + "/" + std::string(metric_name(pair[1])));
      }
    }
  }
  c.require(matrices > 0, "no assembled matrices");
  return {c.failures() == 0, std::to_string(matrices) + " matrices, max |diff| " + fmt("%.2g", worst) +
                                 (c.failures() ? "; " + c.notes() : "")};
}

// ---- 7 -------------------------------------------------------------------

Outcome compas_end_to_end(const EndToEnd& e) {
  if (!e.available) return {false, e.error};
  Checker c;
  const auto& b = e.first;
  c.require(b.complete(), "run incomplete (" + std::to_string(b.failures.size()) + " failures)");
  std::string info;
  std::size_t soft_matches = 0;
  std::vector<double> sums;
  const std::set<std::string> expected_performance{"AUC", "A", "BA", "TPR", "TNR", "PPV", "NPV"};
  for (std::uint64_t seed : b.plan.seeds) {
    const ConditionRecord* cond = b.find_condition("compas", "race", seed);
    const std::string at = "seed " + std::to_string(seed);
    if (cond == nullptr) {
      c.require(false, at + " race condition missing");
      continue;
    }
    // (a) dendrogram cut
    if (cond->column_linkage.leaves != kMetricCount) {
      c.require(false, at + " no column linkage");
    } else {
      const auto ids = cut_clusters(cond->column_linkage, 2);
      auto id = [&](Metric m) { return ids[static_cast<std::size_t>(m)]; };
      for (const auto& pair : kComplementPairs) {
        c.require(id(pair[0]) != id(pair[1]), at + " " + std::string(metric_name(pair[0])) + "/" +
                                                  std::string(metric_name(pair[1])) + " share a cluster");
      }
      c.require(id(Metric::AUC) == id(Metric::A) && id(Metric::A) == id(Metric::BA), at + " AUC/A/BA split");
      std::set<std::string> with_auc;
      for (std::size_t j = 0; j < kMetricCount; ++j) {
        if (ids[j] == id(Metric::AUC)) with_auc.insert(std::string(metric_name(j)));
      }
      soft_matches += with_auc == expected_performance;
    }
    // (b) direction of the logit disparities
    const auto aa = cond->matrix.find_row("logit", "African-American");
    const auto cau = cond->matrix.find_row("logit", "Caucasian");
    if (!aa || !cau) {
      c.require(false, at + " logit rows missing");
    } else {
      auto val = [&](std::size_t row, Metric m) {
        return cond->matrix.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(m));
      };
      c.require(val(*aa, Metric::TPR) > val(*cau, Metric::TPR),
                at + fmt(" TPR AA %.3f", val(*aa, Metric::TPR)) + fmt(" <= Cau %.3f", val(*cau, Metric::TPR)));
      c.require(val(*aa, Metric::PPREV) > val(*cau, Metric::PPREV),
                at + fmt(" PPREV AA %.3f", val(*aa, Metric::PPREV)) +
                    fmt(" <= Cau %.3f", val(*cau, Metric::PPREV)));
    }
    // (c) first two full-matrix components
    if (cond->full_pca.component_count() < 2) {
      c.require(false, at + " fewer than two components");
    } else {
      const double sum = cond->full_pca.explained_variance_ratios(0) + cond->full_pca.explained_variance_ratios(1);
      sums.push_back(sum);
      c.require(sum >= 0.85, at + fmt(" first-two ratio sum %.3f < 0.85", sum));
    }
  }
  c.require(e.first_seconds < 600.0, fmt("runtime %.1f s exceeds 600 s", e.first_seconds));
  info = fmt("runtime %.1f s", e.first_seconds) + "; ratio sums";
  for (double s : sums) info += fmt(" %.3f", s);
  info += "; expected cluster composition matched in " + std::to_string(soft_matches) + "/" +
          std::to_string(b.plan.seeds.size()) + " seeds (informational)";
  return {c.failures() == 0, info + (c.failures() ? "; " + c.notes() : "")};
}

// ---- 8 -------------------------------------------------------------------

Outcome cross_condition_stability(const EndToEnd& e) {
  if (!e.available) return {false, e.error};
  Checker c;
  const auto& b = e.first;
  std::vector<double> per_seed;
  for (std::uint64_t seed : b.plan.seeds) {
    const auto* sex = b.find_condition("compas", "sex", seed);
    const auto* race = b.find_condition("compas", "race", seed);
    if (sex == nullptr || race == nullptr) {
      c.require(false, "seed " + std::to_string(seed) + " missing a condition");
      continue;
    }
    const double ab = distance_vector_correlation(sex->column_distances, race->column_distances);
    const double ba = distance_vector_correlation(race->column_distances, sex->column_distances);
    const double aa = distance_vector_correlation(sex->column_distances, sex->column_distances);
    const double bb = distance_vector_correlation(race->column_distances, race->column_distances);
    c.require(ab == ba, "seed " + std::to_string(seed) + " asymmetric");
    c.require(std::fabs(aa - 1.0) <= 1e-12 && std::fabs(bb - 1.0) <= 1e-12, "seed " + std::to_string(seed) +
                                                                              " diagonal not 1");
    per_seed.push_back(ab);
  }
  double mean = 0.0, var = 0.0;
  for (double v : per_seed) mean += v;
  mean /= static_cast<double>(std::max<std::size_t>(per_seed.size(), 1));
  for (double v : per_seed) var += (v - mean) * (v - mean);
  const double std = std::sqrt(var / static_cast<double>(std::max<std::size_t>(per_seed.size(), 1)));
  c.require(per_seed.size() == b.plan.seeds.size(), "not every seed produced both conditions");
  c.require(std < 0.3, fmt("std across seeds %.3f >= 0.3", std));

  // The bundle's own robustness summary must agree.
  if (!b.robustness) {
    c.require(false, "bundle has no robustness summary");
  } else {
    const auto& s = b.robustness->summary;
    for (Eigen::Index i = 0; i < s.mean.rows(); ++i) {
      c.require(s.mean(i, i) == 1.0 && s.std(i, i) == 0.0, "summary diagonal");
      for (Eigen::Index j = 0; j < s.mean.cols(); ++j) {
        c.require(s.mean(i, j) == s.mean(j, i) && s.std(i, j) == s.std(j, i), "summary asymmetric");
      }
    }
    c.require(s.labels.size() == 2, "summary should cover compas/sex and compas/race");
    if (s.labels.size() == 2) {
      c.require(std::fabs(s.mean(0, 1) - mean) <= 1e-12, "summary mean disagrees with direct computation");
      c.require(std::fabs(s.std(0, 1) - std) <= 1e-12, "summary std disagrees with direct computation");
    }
  }
  std::string detail = "correlation per seed";
  for (double v : per_seed) detail += fmt(" %.3f", v);
  detail += fmt("; mean %.3f", mean) + fmt(", std %.3f", std);
  return {c.failures() == 0, detail + (c.failures() ? "; " + c.notes() : "")};
}

// ---- 9 -------------------------------------------------------------------

std::map<std::string, std::string> output_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext != ".svg" && entry.path().filename() != "bundle.json") continue;
    out[fs::relative(entry.path(), dir).string()] = read_text_file(entry.path());
  }
  return out;
}

Outcome determinism(const EndToEnd& e) {
  if (!e.available) return {false, e.error};
  Checker c;
  const auto a = output_files(e.first_dir);
  const auto b = output_files(e.second_dir);
  c.require(a.count("bundle.json") == 1, "bundle.json missing");
  c.require(a.size() == b.size(), "different file sets");
  std::size_t svgs = 0;
  for (const auto& [name, content] : a) {
    svgs += name.size() > 4 && name.substr(name.size() - 4) == ".svg";
    const auto it = b.find(name);
    c.require(it != b.end() && it->second == content, name + " differs");
  }
  return {c.failures() == 0, "bundle.json and " + std::to_string(svgs) + " SVG files compared" +
                                 (c.failures() ? "; " + c.notes() : "")};
}

// ---- 10 ------------------------------------------------------------------

Outcome audit_mode(const fs::path& scratch) {
  Checker c;
  try {
    // Scores take two values; a fixed 0.5 threshold turns them into the
    // designed confusion counts.
    //   group A: 50 positives (45 high), 50 negatives (5 high)  -> TPR .9, FPR .1
    //   group B: 50 positives (30 high), 50 negatives (15 high) -> TPR .6, FPR .3
    std::string text = "y_true,y_score,group\n";
    auto rows = [&](const char* group, int label, int high, int low) {
      for (int i = 0; i < high; ++i) text += std::to_string(label) + ",0.8," + group + "\n";
      for (int i = 0; i < low; ++i) text += std::to_string(label) + ",0.2," + group + "\n";
    };
    rows("A", 1, 45, 5);
    rows("A", 0, 5, 45);
    rows("B", 1, 30, 20);
    rows("B", 0, 15, 35);
    const fs::path file = scratch / "audit" / "predictions.csv";
    write_text_file(file, text);

    AuditConfig config;
    config.dataset = "synthetic";
    config.files = {{"scorer", file}};
    config.features = {"group"};
    config.fixed_threshold = 0.5;
    const AuditBundle bundle = audit_external_predictions(config);
    c.require(bundle.complete(), "audit incomplete");
    const ConditionRecord* cond = bundle.find_condition("synthetic", "group", 0);
    if (cond == nullptr) return {false, "no condition produced"};

    // Expected vectors straight from the construction; N = 200.
    struct Design {
      const char* group;
      double tp, fp, tn, fn, auc;
    };
    // AUC with two score levels: P(high | pos) P(low | neg) + ties / 2.
    const Design designs[] = {{"A", 45, 5, 45, 5, 0.9 * 0.9 + 0.5 * (0.9 * 0.1 + 0.1 * 0.9)},
                              {"B", 30, 15, 35, 20, 0.6 * 0.7 + 0.5 * (0.6 * 0.3 + 0.4 * 0.7)}};
    double worst = 0.0;
    for (const auto& d : designs) {
      const auto row = cond->matrix.find_row("scorer", d.group);
      if (!row) {
        c.require(false, std::string("row for group ") + d.group + " missing");
        continue;
      }
      const double n = d.tp + d.fp + d.tn + d.fn;
      std::map<Metric, double> want{
          {Metric::AUC, d.auc},
          {Metric::A, (d.tp + d.tn) / n},
          {Metric::BA, (d.tp / (d.tp + d.fn) + d.tn / (d.tn + d.fp)) / 2},
          {Metric::FPR, d.fp / (d.fp + d.tn)},
          {Metric::TPR, d.tp / (d.tp + d.fn)},
          {Metric::FNR, d.fn / (d.tp + d.fn)},
          {Metric::TNR, d.tn / (d.tn + d.fp)},
          {Metric::PPV, d.tp / (d.tp + d.fp)},
          {Metric::NPV, d.tn / (d.tn + d.fn)},
          {Metric::FDR, d.fp / (d.tp + d.fp)},
          {Metric::FOR, d.fn / (d.tn + d.fn)},
          {Metric::PPR, (d.tp + d.fp) / 200.0},
          {Metric::PPREV, (d.tp + d.fp) / n},
      };
      for (const auto& [metric, value] : want) {
        const double got = cond->matrix.values(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(metric));
        worst = std::max(worst, std::fabs(got - value));
        c.require(std::fabs(got - value) <= 1e-12, std::string(d.group) + " " + std::string(metric_name(metric)));
        c.require(!cond->matrix.imputed[*row][static_cast<std::size_t>(metric)],
                  std::string(d.group) + " " + std::string(metric_name(metric)) + " flagged");
      }
    }
    const double designed_tpr[] = {0.9, 0.6};
    const double designed_fpr[] = {0.1, 0.3};
    for (int g = 0; g < 2; ++g) {
      const auto row = *cond->matrix.find_row("scorer", g == 0 ? "A" : "B");
      c.require(std::fabs(cond->matrix.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(Metric::TPR)) -
                          designed_tpr[g]) <= 1e-12,
                "designed TPR");
      c.require(std::fabs(cond->matrix.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(Metric::FPR)) -
                          designed_fpr[g]) <= 1e-12,
                "designed FPR");
    }
    const auto ratio = fairness_ratio(cond->matrix, Metric::TPR, "scorer", "B", "A");
    c.require(ratio.has_value() && std::fabs(*ratio - 2.0 / 3.0) <= 1e-12,
              ratio ? fmt("TPR ratio %.17g", *ratio) : std::string("TPR ratio undefined"));
    return {c.failures() == 0, "max |diff| " + fmt("%.2g", worst) +
                                   (ratio ? fmt(", TPR(B)/TPR(A) = %.15f", *ratio) : std::string()) +
                                   (c.failures() ? "; " + c.notes() : "")};
  } catch (const std::exception& ex) {
    return {false, std::string("error: ") + ex.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  fs::path configs = FAIRLENS_CONFIG_DIR;
  fs::path scratch = fs::temp_directory_path() / "fairlens_acceptance";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--configs") configs = argv[i + 1];
    else if (flag == "--scratch") scratch = argv[i + 1];
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  EndToEnd e2e;
  bool e2e_ran = false;
  auto end_to_end = [&]() -> const EndToEnd& {
    if (!e2e_ran) {
      e2e = run_end_to_end(configs, scratch / "e2e");
      e2e_ran = true;
    }
    return e2e;
  };

  const std::vector<Criterion> criteria{
      {1, "metric identities", metric_identities},
      {2, "AUC vs pair counting", auc_oracle},
      {3, "UPGMA vs naive agglomeration", upgma_oracle},
      {4, "PCA vs Jacobi eigendecomposition", pca_oracle},
      {5, "threshold vs 10,001-point sweep", threshold_exhaustiveness},
      {6, "complement-variance equality", [&] { return complement_variances(end_to_end()); }},
      {7, "COMPAS logit+mlp race end-to-end", [&] { return compas_end_to_end(end_to_end()); }},
      {8, "COMPAS sex/race distance correlation", [&] { return cross_condition_stability(end_to_end()); }},
      {9, "determinism of bundle.json and SVGs", [&] { return determinism(end_to_end()); }},
      {10, "audit-only synthetic construction", [&] { return audit_mode(scratch); }},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Outcome o;
    try {
      o = criterion.check();
    } catch (const std::exception& ex) {
      o = {false, std::string("error: ") + ex.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", criterion.id, criterion.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  fs::remove_all(scratch);
  return std::min(failed, 255);
}
