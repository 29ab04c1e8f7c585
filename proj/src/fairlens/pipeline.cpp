#include "fairlens/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <iostream>
#include <numeric>
#include <set>
#include <thread>

#include "fairlens/csv.hpp"
#include "fairlens/error.hpp"
#include "fairlens/io.hpp"
#include "fairlens/models/search.hpp"
#include "fairlens/render.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {

namespace {

/// Runs f(0..count-1) on up to `jobs` threads. `f` must not throw.
template <typename F>
void parallel_for(std::size_t count, std::size_t jobs, F&& f) {
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

template <typename T>
std::vector<T> take(const std::vector<T>& v, std::span<const std::size_t> rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (const std::size_t r : rows) out.push_back(v[r]);
  return out;
}

struct FoldData {
  Eigen::MatrixXd train_x, validation_x, test_x;
  std::vector<int> train_y, validation_y, test_y;
  std::vector<std::size_t> test_rows;
};

struct DrawResult {
  bool ok = false;
  std::string error;
  AucValue validation_auc;
  std::vector<double> validation_scores;
  std::vector<double> test_scores;
};

struct TrainJob {
  std::size_t fold = 0;
  std::size_t kind = 0;  // index into the configured kinds
  std::size_t draw = 0;
};

void log(bool verbose, const std::string& line) {
  if (verbose) std::cerr << line << '\n';
}

std::string path_safe(const std::string& name) {
  std::string out;
  for (const char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() || out == "." || out == ".." ? "_" + out : out;
}

/// Top two by pooled test AUC (ties keep matrix order), or the requested
/// models that are present. Returned in matrix order.
std::vector<std::string> choose_plot_models(const std::vector<std::string>& models,
                                            const std::map<std::string, double>& pooled_auc,
                                            const std::vector<std::string>& requested, std::vector<std::string>& notes) {
  std::vector<std::string> chosen;
  if (!requested.empty()) {
    for (const auto& m : models) {
      if (std::find(requested.begin(), requested.end(), m) != requested.end()) chosen.push_back(m);
    }
    if (chosen.size() != requested.size()) notes.push_back("some requested plot models are absent from this matrix");
    if (!chosen.empty()) return chosen;
  }
  std::vector<std::size_t> order(models.size());
  std::iota(order.begin(), order.end(), 0);
  auto auc = [&](std::size_t i) {
    const auto it = pooled_auc.find(models[i]);
    return it == pooled_auc.end() ? 0.0 : it->second;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return auc(a) > auc(b); });
  order.resize(std::min<std::size_t>(2, order.size()));
  std::sort(order.begin(), order.end());
  for (const std::size_t i : order) chosen.push_back(models[i]);
  return chosen;
}

std::string best_model(const std::vector<std::string>& candidates, const std::map<std::string, double>& pooled_auc) {
  std::string best = candidates.front();
  double best_auc = -1.0;
  for (const auto& m : candidates) {
    const auto it = pooled_auc.find(m);
    const double auc = it == pooled_auc.end() ? 0.0 : it->second;
    if (auc > best_auc) {
      best_auc = auc;
      best = m;
    }
  }
  return best;
}

void cluster_condition(ConditionRecord& c, std::vector<FailureRecord>& failures) {
  c.column_distances = {};
  c.row_distances = {};
  c.column_linkage = {};
  c.row_linkage = {};
  try {
    std::vector<std::string> metric_labels;
    for (std::size_t j = 0; j < kMetricCount; ++j) metric_labels.emplace_back(metric_name(j));
    std::vector<std::string> row_labels;
    for (const auto& r : c.matrix.rows) row_labels.push_back(r.label());
    c.column_distances = correlation_distance(c.matrix.values, DistanceAxis::Columns, metric_labels);
    c.row_distances = correlation_distance(c.matrix.values, DistanceAxis::Rows, row_labels);
    c.column_linkage = upgma(c.column_distances);
    c.row_linkage = upgma(c.row_distances);
    std::string constant;
    for (std::size_t j = 0; j < c.column_distances.constant_items.size(); ++j) {
      if (c.column_distances.constant_items[j]) constant += (constant.empty() ? "" : ",") + c.column_distances.labels[j];
    }
    if (!constant.empty()) c.notes.push_back("constant metric columns (correlation undefined): " + constant);
  } catch (const std::exception& e) {
    failures.push_back({c.dataset, c.feature, c.seed, "cluster", e.what()});
  }
}

void project_condition(ConditionRecord& c, const std::map<std::string, double>& pooled_auc,
                       const std::optional<std::string>& reference_model, std::vector<FailureRecord>& failures) {
  c.full_pca = {};
  c.model_pca = {};
  c.projection = {};
  c.reference_model.clear();
  try {
    c.full_pca = full_matrix_pca(c.matrix);
    c.reference_model = reference_model ? *reference_model : best_model(c.plot_models, pooled_auc);
    const ModelProjection p = reference_aligned_projection(c.matrix, c.reference_model, c.reference_group);
    c.model_pca = p.pca;
    c.projection = p.aligned;
    if (c.projection.component_count() < 2) {
      c.notes.push_back("PCA scatter not drawn: " + std::to_string(c.projection.groups.size()) +
                        " groups give a single component");
    }
  } catch (const std::exception& e) {
    failures.push_back({c.dataset, c.feature, c.seed, "pca", e.what()});
  }
}

const std::map<std::string, double>* pooled_auc_for(const AuditBundle& b, const std::string& dataset,
                                                    std::uint64_t seed) {
  for (const auto& d : b.datasets) {
    if (d.name != dataset) continue;
    for (const auto& r : d.runs) {
      if (r.seed == seed) return &r.pooled_test_auc;
    }
  }
  return nullptr;
}

/// Drops failures of `stage` recorded for conditions that are recomputed.
void drop_stage_failures(AuditBundle& b, const std::string& stage) {
  std::erase_if(b.failures, [&](const FailureRecord& f) {
    return f.stage == stage && b.find_condition(f.dataset, f.feature, f.seed.value_or(0)) != nullptr;
  });
}

void run_dataset(const DatasetSpec& spec, const RunConfig& config, AuditBundle& bundle) {
  DatasetRecord rec;
  rec.name = spec.name;
  rec.positive_meaning = to_string(spec.positive_meaning);
  rec.features = spec.protected_features;

  RawTable table;
  std::optional<FeatureEncoder> encoder;
  Eigen::MatrixXd design;
  std::vector<int> labels;
  std::vector<GroupIndex> groups;
  try {
    table = load_dataset(spec);
    encoder.emplace(table, spec);
    design = encoder->encode(table);
    labels = encoder->encode_labels(table);
    groups = extract_groups(table, spec);
  } catch (const std::exception& e) {
    bundle.failures.push_back({spec.name, "", std::nullopt, "ingest", e.what()});
    bundle.datasets.push_back(std::move(rec));
    return;
  }
  rec.rows = table.rows();
  rec.dropped_rows = table.dropped_rows;
  rec.design_columns = encoder->column_names();
  for (const auto& g : groups) rec.groups.push_back({g.feature, g.labels, g.sizes, g.reference_label()});
  if (table.dropped_rows > 0) {
    bundle.warnings.push_back(spec.name + ": dropped " + std::to_string(table.dropped_rows) +
                              " rows with missing values");
  }
  const std::size_t n = table.rows();
  log(config.verbose, spec.name + ": " + std::to_string(n) + " rows, " + std::to_string(design.cols()) +
                          " design columns");

  const std::vector<ModelKind>& kinds = config.models;
  for (const std::uint64_t seed : config.plan.seeds) {
    SeedRun run;
    run.seed = seed;
    std::vector<SplitAssignment> folds;
    try {
      folds = make_folds(n, config.plan, seed);
    } catch (const std::exception& e) {
      bundle.failures.push_back({spec.name, "", seed, "splits", e.what()});
      continue;
    }

    std::vector<FoldData> data(folds.size());
    try {
      for (std::size_t f = 0; f < folds.size(); ++f) {
        const SplitAssignment& s = folds[f];
        Eigen::MatrixXd x = design;
        Standardizer::fit(x, encoder->scaled_columns(), s.train_rows).apply(x);
        data[f] = {take_rows(x, s.train_rows),  take_rows(x, s.validation_rows), take_rows(x, s.test_rows),
                   take(labels, s.train_rows),  take(labels, s.validation_rows), take(labels, s.test_rows),
                   s.test_rows};
      }
    } catch (const std::exception& e) {
      bundle.failures.push_back({spec.name, "", seed, "splits", e.what()});
      continue;
    }

    std::vector<std::vector<HyperDraw>> draws;
    for (const ModelKind kind : kinds) {
      draws.push_back(sample_hypers(kind, has_hyperparameters(kind) ? config.search_draws : 1, seed));
    }
    std::vector<TrainJob> jobs;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      for (std::size_t k = 0; k < kinds.size(); ++k) {
        for (std::size_t d = 0; d < draws[k].size(); ++d) jobs.push_back({f, k, d});
      }
    }
    std::vector<DrawResult> results(jobs.size());
    parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
      const TrainJob& job = jobs[i];
      const FoldData& fd = data[job.fold];
      DrawResult& r = results[i];
      try {
        const std::uint64_t job_seed =
            derive_seed({seed, job.fold, static_cast<std::uint64_t>(kinds[job.kind]), job.draw});
        const TrainedModel model = train(draws[job.kind][job.draw], fd.train_x, fd.train_y, job_seed);
        r.validation_scores = model.predict_scores(fd.validation_x);
        r.test_scores = model.predict_scores(fd.test_x);
        r.validation_auc = auc_or_imputed(r.validation_scores, fd.validation_y);
        r.ok = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    });
    log(config.verbose, spec.name + " seed " + std::to_string(seed) + ": " + std::to_string(jobs.size()) +
                            " training jobs done");

    // Winner per (fold, kind); a kind must win a draw on every fold to be kept.
    std::vector<std::vector<std::optional<std::size_t>>> winner(folds.size(),
                                                                std::vector<std::optional<std::size_t>>(kinds.size()));
    std::vector<std::vector<std::size_t>> failed(folds.size(), std::vector<std::size_t>(kinds.size(), 0));
    std::vector<std::size_t> job_base(folds.size() * kinds.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].draw == 0) job_base[jobs[i].fold * kinds.size() + jobs[i].kind] = i;
    }
    std::vector<bool> kind_ok(kinds.size(), true);
    std::string first_error;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      for (std::size_t k = 0; k < kinds.size(); ++k) {
        const std::size_t base = job_base[f * kinds.size() + k];
        std::vector<DrawOutcome> outcomes;
        for (std::size_t d = 0; d < draws[k].size(); ++d) {
          const DrawResult& r = results[base + d];
          outcomes.push_back({d, draws[k][d], r.ok, r.validation_auc.value, r.validation_auc.imputed, r.error});
          if (!r.ok) {
            ++failed[f][k];
            if (first_error.empty()) first_error = std::string(to_string(kinds[k])) + ": " + r.error;
          }
        }
        winner[f][k] = best_draw(outcomes);
        if (!winner[f][k]) {
          if (kind_ok[k]) {
            bundle.warnings.push_back(spec.name + " seed " + std::to_string(seed) + ": every " +
                                      std::string(to_string(kinds[k])) + " draw failed on fold " + std::to_string(f) +
                                      "; kind excluded");
          }
          kind_ok[k] = false;
        }
      }
    }
    if (std::none_of(kind_ok.begin(), kind_ok.end(), [](bool b) { return b; })) {
      bundle.failures.push_back({spec.name, "", seed, "models", "every model kind failed; first error: " + first_error});
      rec.runs.push_back(std::move(run));
      continue;
    }

    // Thresholds on validation, pooled test scores per kind.
    std::vector<std::vector<double>> thresholds(kinds.size(), std::vector<double>(folds.size(), 0.5));
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      if (!kind_ok[k]) continue;
      std::vector<double> pooled_scores;
      std::vector<int> pooled_labels;
      for (std::size_t f = 0; f < folds.size(); ++f) {
        const std::size_t d = *winner[f][k];
        const DrawResult& r = results[job_base[f * kinds.size() + k] + d];
        const ThresholdChoice t = select_threshold(r.validation_scores, data[f].validation_y);
        thresholds[k][f] = t.threshold;
        run.winners.push_back({std::string(to_string(kinds[k])), f, d, describe_params(draws[k][d]),
                               r.validation_auc.value, r.validation_auc.imputed, t.threshold, t.fallback,
                               failed[f][k]});
        pooled_scores.insert(pooled_scores.end(), r.test_scores.begin(), r.test_scores.end());
        pooled_labels.insert(pooled_labels.end(), data[f].test_y.begin(), data[f].test_y.end());
      }
      run.pooled_test_auc[std::string(to_string(kinds[k]))] = auc_or_imputed(pooled_scores, pooled_labels).value;
    }

    for (const GroupIndex& gi : groups) {
      std::vector<ModelGroupMetrics> per_model;
      std::string stage = "metrics";
      try {
        for (std::size_t k = 0; k < kinds.size(); ++k) {
          if (!kind_ok[k]) continue;
          std::vector<std::vector<GroupTally>> by_group(gi.group_count());
          for (std::size_t f = 0; f < folds.size(); ++f) {
            const DrawResult& r = results[job_base[f * kinds.size() + k] + *winner[f][k]];
            const std::vector<int> test_groups = take(gi.assignment, data[f].test_rows);
            auto tallies = tally_groups(r.test_scores, data[f].test_y, test_groups, gi.group_count(), thresholds[k][f]);
            for (std::size_t g = 0; g < tallies.size(); ++g) by_group[g].push_back(std::move(tallies[g]));
          }
          ModelGroupMetrics mg{std::string(to_string(kinds[k])), {}};
          for (const auto& tallies : by_group) mg.by_group.push_back(aggregate_over_folds(tallies, n));
          per_model.push_back(std::move(mg));
        }
        stage = "fairmatrix";
        MetricsMatrix matrix = assemble_matrix(per_model, gi, {spec.name, gi.feature, seed, "micro"});
        bundle.conditions.push_back(
            analyze_condition(std::move(matrix), run.pooled_test_auc, gi.reference_label(), config.plot_models,
                              bundle.failures));
      } catch (const std::exception& e) {
        bundle.failures.push_back({spec.name, gi.feature, seed, stage, e.what()});
      }
    }
    rec.runs.push_back(std::move(run));
  }
  bundle.datasets.push_back(std::move(rec));
}

bool parse_binary(std::string_view cell, int& out) {
  if (cell == "1" || cell == "1.0" || cell == "true" || cell == "True") {
    out = 1;
    return true;
  }
  if (cell == "0" || cell == "0.0" || cell == "false" || cell == "False") {
    out = 0;
    return true;
  }
  return false;
}

struct ModelRows {
  std::string model;
  std::string source;
  std::vector<int> y;
  std::vector<double> scores;
  std::vector<int> validation;
  std::vector<std::vector<std::string>> groups;  // per feature
  std::vector<std::size_t> lines;
};

std::vector<ModelRows> read_prediction_files(const AuditConfig& config) {
  std::vector<ModelRows> models;
  auto model_slot = [&](const std::string& name, const std::string& source) -> ModelRows& {
    for (auto& m : models) {
      if (m.model == name) {
        if (m.source != source) throw invalid_argument("model '" + name + "' appears in more than one file");
        return m;
      }
    }
    models.push_back({name, source, {}, {}, {}, std::vector<std::vector<std::string>>(config.features.size()), {}});
    return models.back();
  };

  for (const auto& file : config.files) {
    const std::string where = file.path.string();
    const csv::Document doc = csv::read_file(file.path);
    auto need = [&](const std::string& column) {
      const std::size_t idx = doc.column(column);
      if (idx == csv::Document::npos) throw invalid_argument(where + ": missing column '" + column + "'");
      return idx;
    };
    const std::size_t y_col = need("y_true");
    const std::size_t s_col = need("y_score");
    std::vector<std::size_t> group_cols;
    for (const auto& f : config.features) {
      const std::size_t idx = doc.column(f);
      if (idx == csv::Document::npos) throw invalid_argument(where + ": missing group column '" + f + "'");
      group_cols.push_back(idx);
    }
    const std::size_t v_col = config.validation_column.empty() ? csv::Document::npos : need(config.validation_column);
    std::size_t m_col = csv::Document::npos;
    if (file.model.empty()) m_col = need(config.model_column);

    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
      const auto& row = doc.rows[r];
      const std::string at = where + " line " + std::to_string(doc.line_numbers[r]);
      ModelRows& m = model_slot(file.model.empty() ? row[m_col] : file.model, where);
      int y = 0;
      if (!parse_binary(row[y_col], y)) throw invalid_argument(at + ": y_true '" + row[y_col] + "' is not 0 or 1");
      double score = 0.0;
      const std::string& cell = row[s_col];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), score);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(score)) {
        throw invalid_argument(at + ": y_score '" + cell + "' is not a number");
      }
      if (score < 0.0 || score > 1.0) throw invalid_argument(at + ": y_score " + cell + " outside [0, 1]");
      int is_val = 0;
      if (v_col != csv::Document::npos && !parse_binary(row[v_col], is_val)) {
        throw invalid_argument(at + ": validation flag '" + row[v_col] + "' is not 0 or 1");
      }
      for (std::size_t f = 0; f < group_cols.size(); ++f) {
        if (row[group_cols[f]].empty()) {
          throw invalid_argument(at + ": empty group value in column '" + config.features[f] + "'");
        }
        m.groups[f].push_back(row[group_cols[f]]);
      }
      m.y.push_back(y);
      m.scores.push_back(score);
      m.validation.push_back(is_val);
      m.lines.push_back(doc.line_numbers[r]);
    }
  }
  if (models.empty()) throw invalid_argument("prediction files contain no rows");
  const ModelRows& first = models.front();
  for (const auto& m : models) {
    if (m.y.size() != first.y.size()) {
      throw invalid_argument("model '" + m.model + "' has " + std::to_string(m.y.size()) + " rows, model '" +
                             first.model + "' has " + std::to_string(first.y.size()));
    }
    for (std::size_t f = 0; f < config.features.size(); ++f) {
      for (std::size_t r = 0; r < m.y.size(); ++r) {
        if (m.groups[f][r] != first.groups[f][r]) {
          throw invalid_argument("group column '" + config.features[f] + "' differs between models '" + first.model +
                                 "' and '" + m.model + "' at row " + std::to_string(r + 1));
        }
      }
    }
    if (m.validation != first.validation) {
      throw invalid_argument("validation rows differ between models '" + first.model + "' and '" + m.model + "'");
    }
  }
  return models;
}

}  // namespace

ConditionRecord analyze_condition(MetricsMatrix matrix, const std::map<std::string, double>& pooled_auc,
                                  const std::string& reference_group, const std::vector<std::string>& plot_models,
                                  std::vector<FailureRecord>& failures) {
  ConditionRecord c;
  c.dataset = matrix.provenance.dataset;
  c.feature = matrix.provenance.feature;
  c.seed = matrix.provenance.seed;
  c.matrix = std::move(matrix);
  c.reference_group = reference_group;
  c.plot_models = choose_plot_models(c.matrix.models(), pooled_auc, plot_models, c.notes);
  cluster_condition(c, failures);
  project_condition(c, pooled_auc, std::nullopt, failures);
  return c;
}

AuditBundle run_pipeline(const RunConfig& config) {
  config.validate();
  AuditBundle bundle;
  bundle.mode = RunMode::Full;
  bundle.plan = {config.plan.k, config.plan.seeds, config.plan.validation_fraction, config.search_draws, {}};
  for (const ModelKind k : config.models) bundle.plan.models.emplace_back(to_string(k));
  for (const auto& spec : config.datasets) run_dataset(spec, config, bundle);
  try {
    compute_robustness(bundle);
  } catch (const std::exception& e) {
    bundle.failures.push_back({"", "", std::nullopt, "robustness", e.what()});
  }
  return bundle;
}

AuditBundle audit_external_predictions(const AuditConfig& config) {
  config.validate();
  const std::vector<ModelRows> models = read_prediction_files(config);

  AuditBundle bundle;
  bundle.mode = RunMode::AuditOnly;
  bundle.plan = {0, {0}, 0.0, 0, {}};
  for (const auto& m : models) bundle.plan.models.push_back(m.model);

  DatasetRecord rec;
  rec.name = config.dataset;
  rec.positive_meaning = "unspecified";
  rec.rows = models.front().y.size();
  rec.features = config.features;

  std::vector<GroupIndex> groups;
  for (std::size_t f = 0; f < config.features.size(); ++f) {
    const auto ref = config.reference_groups.find(config.features[f]);
    groups.push_back(make_group_index(config.features[f], models.front().groups[f],
                                      ref == config.reference_groups.end() ? std::nullopt
                                                                           : std::optional<std::string>(ref->second)));
    rec.groups.push_back({groups.back().feature, groups.back().labels, groups.back().sizes,
                          groups.back().reference_label()});
  }

  // Rows flagged for validation pick the threshold; the rest are audited.
  std::vector<std::size_t> eval_rows;
  std::vector<std::size_t> val_rows;
  for (std::size_t r = 0; r < models.front().validation.size(); ++r) {
    (models.front().validation[r] ? val_rows : eval_rows).push_back(r);
  }
  if (eval_rows.empty()) throw invalid_argument("every row is flagged for validation; nothing left to audit");
  if (!config.validation_column.empty() && val_rows.empty()) {
    throw invalid_argument("validation column '" + config.validation_column + "' flags no rows");
  }

  SeedRun run;
  std::vector<double> thresholds;
  for (const auto& m : models) {
    FoldWinner w;
    w.model = m.model;
    w.params = "external:" + m.source;
    if (config.fixed_threshold) {
      w.threshold = *config.fixed_threshold;
    } else {
      const auto val_scores = take(m.scores, val_rows);
      const auto val_y = take(m.y, val_rows);
      const ThresholdChoice t = select_threshold(val_scores, val_y);
      const AucValue auc = auc_or_imputed(val_scores, val_y);
      w.threshold = t.threshold;
      w.threshold_fallback = t.fallback;
      w.validation_auc = auc.value;
      w.validation_auc_imputed = auc.imputed;
    }
    thresholds.push_back(w.threshold);
    run.winners.push_back(w);
    run.pooled_test_auc[m.model] = auc_or_imputed(take(m.scores, eval_rows), take(m.y, eval_rows)).value;
  }

  for (const GroupIndex& gi : groups) {
    std::string stage = "metrics";
    try {
      const std::vector<int> eval_groups = take(gi.assignment, eval_rows);
      std::vector<ModelGroupMetrics> per_model;
      for (std::size_t l = 0; l < models.size(); ++l) {
        per_model.push_back({models[l].model,
                             group_metric_vectors(take(models[l].scores, eval_rows), take(models[l].y, eval_rows),
                                                  eval_groups, gi.group_count(), thresholds[l], eval_rows.size())});
      }
      stage = "fairmatrix";
      MetricsMatrix matrix = assemble_matrix(per_model, gi, {config.dataset, gi.feature, 0, "external"});
      bundle.conditions.push_back(analyze_condition(std::move(matrix), run.pooled_test_auc, gi.reference_label(),
                                                    config.plot_models, bundle.failures));
    } catch (const std::exception& e) {
      bundle.failures.push_back({config.dataset, gi.feature, 0, stage, e.what()});
    }
  }
  rec.runs.push_back(std::move(run));
  bundle.datasets.push_back(std::move(rec));
  try {
    compute_robustness(bundle);
  } catch (const std::exception& e) {
    bundle.failures.push_back({"", "", std::nullopt, "robustness", e.what()});
  }
  return bundle;
}

void compute_robustness(AuditBundle& bundle) {
  bundle.robustness.reset();
  std::vector<std::string> labels;
  for (const auto& c : bundle.conditions) {
    if (std::find(labels.begin(), labels.end(), c.label()) == labels.end()) labels.push_back(c.label());
  }
  std::vector<std::uint64_t> seeds;
  for (const auto seed : bundle.plan.seeds) {
    const bool any = std::any_of(bundle.conditions.begin(), bundle.conditions.end(),
                                 [&](const ConditionRecord& c) { return c.seed == seed; });
    if (any) seeds.push_back(seed);
  }
  auto usable = [&](const std::string& label, std::uint64_t seed) {
    for (const auto& c : bundle.conditions) {
      if (c.label() == label && c.seed == seed) return c.column_distances.item_count() == kMetricCount;
    }
    return false;
  };
  std::vector<std::string> kept;
  for (const auto& label : labels) {
    const bool all = std::all_of(seeds.begin(), seeds.end(), [&](std::uint64_t s) { return usable(label, s); });
    if (all) {
      kept.push_back(label);
    } else {
      bundle.warnings.push_back("robustness: " + label + " is missing in some seeds and was left out");
    }
  }
  if (kept.size() < 2 || seeds.empty()) return;

  RobustnessRecord r;
  r.seeds = seeds;
  for (const auto seed : seeds) {
    std::vector<DistanceVector> vectors;
    for (const auto& label : kept) {
      for (const auto& c : bundle.conditions) {
        if (c.label() == label && c.seed == seed) vectors.push_back(c.column_distances);
      }
    }
    r.per_seed.push_back(correlate_conditions(vectors, kept));
  }
  r.summary = aggregate_over_seeds(r.per_seed);
  bundle.robustness = std::move(r);
}

void recluster(AuditBundle& bundle) {
  drop_stage_failures(bundle, "cluster");
  for (auto& c : bundle.conditions) {
    std::erase_if(c.notes, [](const std::string& n) { return n.starts_with("constant metric columns"); });
    cluster_condition(c, bundle.failures);
  }
  std::erase_if(bundle.failures, [](const FailureRecord& f) { return f.stage == "robustness"; });
  std::erase_if(bundle.warnings, [](const std::string& w) { return w.starts_with("robustness:"); });
  try {
    compute_robustness(bundle);
  } catch (const std::exception& e) {
    bundle.failures.push_back({"", "", std::nullopt, "robustness", e.what()});
  }
}

void reproject(AuditBundle& bundle, const std::optional<std::string>& reference_model,
               const std::vector<std::string>& plot_models) {
  if (reference_model) {
    const bool known = std::any_of(bundle.conditions.begin(), bundle.conditions.end(), [&](const ConditionRecord& c) {
      const auto models = c.matrix.models();
      return std::find(models.begin(), models.end(), *reference_model) != models.end();
    });
    if (!known) throw invalid_argument("reference model '" + *reference_model + "' is not in the bundle");
  }
  drop_stage_failures(bundle, "pca");
  static const std::map<std::string, double> kNoAuc;
  for (auto& c : bundle.conditions) {
    const auto* auc = pooled_auc_for(bundle, c.dataset, c.seed);
    const auto& pooled = auc ? *auc : kNoAuc;
    std::erase_if(c.notes, [](const std::string& n) {
      return n.starts_with("PCA scatter") || n.starts_with("some requested plot models");
    });
    if (!plot_models.empty()) c.plot_models = choose_plot_models(c.matrix.models(), pooled, plot_models, c.notes);
    project_condition(c, pooled, reference_model, bundle.failures);
  }
}

FigureMatrix figure_matrix(const ConditionRecord& c) {
  const auto models = c.matrix.models();
  if (c.plot_models == models || c.plot_models.empty()) return {c.matrix, c.column_linkage, c.row_linkage};
  MetricsMatrix sub;
  sub.provenance = c.matrix.provenance;
  for (const auto& model : c.plot_models) {
    const MetricsMatrix part = per_model_matrix(c.matrix, model);
    sub.rows.insert(sub.rows.end(), part.rows.begin(), part.rows.end());
    sub.imputed.insert(sub.imputed.end(), part.imputed.begin(), part.imputed.end());
    Eigen::MatrixXd stacked(sub.values.rows() + part.values.rows(), static_cast<Eigen::Index>(kMetricCount));
    stacked << sub.values, part.values;
    sub.values = std::move(stacked);
  }
  sub.column_variances = column_variances(sub.values);
  std::vector<std::string> metric_labels;
  for (std::size_t j = 0; j < kMetricCount; ++j) metric_labels.emplace_back(metric_name(j));
  std::vector<std::string> row_labels;
  for (const auto& r : sub.rows) row_labels.push_back(r.label());
  FigureMatrix out{sub, {}, {}};
  out.columns = upgma(correlation_distance(sub.values, DistanceAxis::Columns, metric_labels));
  out.rows = upgma(correlation_distance(sub.values, DistanceAxis::Rows, row_labels));
  return out;
}

std::filesystem::path condition_directory(const ConditionRecord& c) {
  return std::filesystem::path(path_safe(c.dataset)) / path_safe(c.feature) / ("seed" + std::to_string(c.seed));
}

void write_figures(const AuditBundle& bundle, const std::filesystem::path& out_dir) {
  for (const auto& c : bundle.conditions) {
    const auto dir = out_dir / condition_directory(c);
    write_text_file(dir / "matrix.csv", matrix_to_csv(c.matrix));
    const std::string title = c.dataset + " / " + c.feature + " / seed " + std::to_string(c.seed);
    if (c.column_linkage.leaves == kMetricCount) {
      const FigureMatrix fm = figure_matrix(c);
      write_text_file(dir / "clustermap.svg",
                      render_clustermap_svg(fm.matrix, fm.columns, fm.rows, fm.matrix.column_variances, title));
    }
    if (c.projection.component_count() >= 2) {
      write_text_file(dir / "pca.svg", render_pca_scatter_svg(c.projection, c.plot_models, title));
    } else {
      std::filesystem::remove(dir / "pca.svg");
    }
  }
  if (bundle.robustness) {
    const auto& s = bundle.robustness->summary;
    const auto dir = out_dir / "robustness";
    write_text_file(dir / "means.csv", summary_to_csv(s.labels, s.mean));
    write_text_file(dir / "stds.csv", summary_to_csv(s.labels, s.std));
    write_text_file(dir / "heatmap.svg", render_robustness_svg(s));
  }
}

void write_outputs(const AuditBundle& bundle, const std::filesystem::path& out_dir) {
  write_figures(bundle, out_dir);
  write_text_file(out_dir / "bundle.json", bundle_to_json(bundle));
  if (bundle.failures.empty()) {
    std::filesystem::remove(out_dir / "failures.json");
  } else {
    write_text_file(out_dir / "failures.json", failures_to_json(bundle.failures));
  }
}

}  // namespace fairlens
