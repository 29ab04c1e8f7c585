#include "fairlens/bundle.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <type_traits>
#include <variant>

#include "fairlens/error.hpp"

namespace fairlens {

using Json = nlohmann::ordered_json;

std::string to_string(RunMode mode) { return mode == RunMode::Full ? "full" : "audit-only"; }

namespace {

RunMode run_mode_from_string(const std::string& s) {
  if (s == "full") return RunMode::Full;
  if (s == "audit-only") return RunMode::AuditOnly;
  throw parse_error("unknown run mode '" + s + "'");
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json vector_json(const Eigen::RowVectorXd& v) { return vector_json(Eigen::VectorXd(v.transpose())); }

Eigen::VectorXd vector_from(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

/// `cols` fixes the width of an empty matrix.
Eigen::MatrixXd matrix_from(const Json& j, Eigen::Index cols = 0) {
  if (j.empty()) return Eigen::MatrixXd(0, cols);
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto width = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, width);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != width) throw parse_error("ragged matrix in bundle");
    for (Eigen::Index c = 0; c < width; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Json matrix_to_json(const MetricsMatrix& m) {
  Json rows = Json::array();
  for (const auto& r : m.rows) rows.push_back({{"model", r.model}, {"group", r.group}, {"feature", r.feature}});
  Json columns = Json::array();
  for (std::size_t j = 0; j < kMetricCount; ++j) columns.push_back(std::string(metric_name(j)));
  Json imputed = Json::array();
  for (const auto& flags : m.imputed) imputed.push_back(Json(std::vector<bool>(flags.begin(), flags.end())));
  return {{"provenance",
           {{"dataset", m.provenance.dataset},
            {"feature", m.provenance.feature},
            {"seed", m.provenance.seed},
            {"aggregation", m.provenance.aggregation}}},
          {"rows", rows},
          {"columns", columns},
          {"values", matrix_json(m.values)},
          {"imputed", imputed},
          {"column_variances", vector_json(m.column_variances)}};
}

MetricsMatrix matrix_from_json(const Json& j) {
  MetricsMatrix m;
  const Json& p = j.at("provenance");
  m.provenance = {p.at("dataset").get<std::string>(), p.at("feature").get<std::string>(),
                  p.at("seed").get<std::uint64_t>(), p.at("aggregation").get<std::string>()};
  for (const auto& r : j.at("rows")) {
    m.rows.push_back({r.at("model").get<std::string>(), r.at("group").get<std::string>(),
                      r.at("feature").get<std::string>()});
  }
  const Json& columns = j.at("columns");
  if (columns.size() != kMetricCount) throw parse_error("metrics matrix must have 13 columns");
  for (std::size_t c = 0; c < kMetricCount; ++c) {
    if (columns.at(c).get<std::string>() != metric_name(c)) throw parse_error("metrics matrix columns out of order");
  }
  m.values = matrix_from(j.at("values"), kMetricCount);
  for (const auto& row : j.at("imputed")) {
    std::array<bool, kMetricCount> flags{};
    if (row.size() != kMetricCount) throw parse_error("imputed flags must have 13 entries per row");
    for (std::size_t c = 0; c < kMetricCount; ++c) flags[c] = row.at(c).get<bool>();
    m.imputed.push_back(flags);
  }
  m.column_variances = vector_from(j.at("column_variances"));
  if (static_cast<std::size_t>(m.values.rows()) != m.rows.size() || m.imputed.size() != m.rows.size()) {
    throw parse_error("metrics matrix row count mismatch");
  }
  return m;
}

Json distances_to_json(const DistanceVector& d) {
  return {{"axis", to_string(d.axis)},
          {"labels", d.labels},
          {"values", d.values},
          {"constant_items", Json(std::vector<bool>(d.constant_items.begin(), d.constant_items.end()))}};
}

DistanceVector distances_from_json(const Json& j) {
  DistanceVector d;
  d.axis = distance_axis_from_string(j.at("axis").get<std::string>());
  d.labels = j.at("labels").get<std::vector<std::string>>();
  d.values = j.at("values").get<std::vector<double>>();
  for (const auto& b : j.at("constant_items")) d.constant_items.push_back(b.get<bool>());
  const std::size_t n = d.labels.size();
  if (d.values.size() != n * (n - (n > 0 ? 1 : 0)) / 2) throw parse_error("distance vector length mismatch");
  return d;
}

Json linkage_to_json(const Linkage& l) {
  Json merges = Json::array();
  for (const auto& m : l.merges) merges.push_back(Json::array({m.left, m.right, m.height, m.size}));
  return {{"leaves", l.leaves}, {"merges", merges}};
}

Linkage linkage_from_json(const Json& j) {
  Linkage l;
  l.leaves = j.at("leaves").get<std::size_t>();
  for (const auto& m : j.at("merges")) {
    l.merges.push_back({m.at(0).get<std::size_t>(), m.at(1).get<std::size_t>(), m.at(2).get<double>(),
                        m.at(3).get<std::size_t>()});
  }
  if (l.leaves > 0 && l.merges.size() != l.leaves - 1) throw parse_error("linkage must have n-1 merges");
  return l;
}

Json pca_to_json(const PcaModel& p) {
  return {{"fitted_on", p.fitted_on},
          {"components", matrix_json(p.components)},
          {"column_means", vector_json(p.column_means)},
          {"explained_variance_ratios", vector_json(p.explained_variance_ratios)}};
}

PcaModel pca_from_json(const Json& j) {
  PcaModel p;
  p.fitted_on = j.at("fitted_on").get<std::string>();
  p.column_means = vector_from(j.at("column_means")).transpose();
  p.components = matrix_from(j.at("components"), p.column_means.size());
  p.explained_variance_ratios = vector_from(j.at("explained_variance_ratios"));
  return p;
}

Json projection_to_json(const AlignedProjection& a) {
  Json coords = Json::object();
  for (std::size_t l = 0; l < a.models.size(); ++l) coords[a.models[l]] = matrix_json(a.coordinates[l]);
  return {{"reference_group", a.reference_group},
          {"groups", a.groups},
          {"models", a.models},
          {"explained_variance_ratios", vector_json(a.explained_variance_ratios)},
          {"coordinates", coords}};
}

AlignedProjection projection_from_json(const Json& j) {
  AlignedProjection a;
  a.reference_group = j.at("reference_group").get<std::string>();
  a.groups = j.at("groups").get<std::vector<std::string>>();
  a.models = j.at("models").get<std::vector<std::string>>();
  a.explained_variance_ratios = vector_from(j.at("explained_variance_ratios"));
  for (const auto& model : a.models) {
    a.coordinates.push_back(matrix_from(j.at("coordinates").at(model), a.explained_variance_ratios.size()));
  }
  return a;
}

Json failure_to_json(const FailureRecord& f) {
  Json j{{"dataset", f.dataset}, {"feature", f.feature}};
  j["seed"] = f.seed ? Json(*f.seed) : Json(nullptr);
  j["stage"] = f.stage;
  j["message"] = f.message;
  return j;
}

FailureRecord failure_from_json(const Json& j) {
  FailureRecord f;
  f.dataset = j.at("dataset").get<std::string>();
  f.feature = j.at("feature").get<std::string>();
  if (!j.at("seed").is_null()) f.seed = j.at("seed").get<std::uint64_t>();
  f.stage = j.at("stage").get<std::string>();
  f.message = j.at("message").get<std::string>();
  return f;
}

Json correlation_to_json(const CorrelationMatrix& c) { return {{"labels", c.labels}, {"values", matrix_json(c.values)}}; }

CorrelationMatrix correlation_from_json(const Json& j) {
  CorrelationMatrix c;
  c.labels = j.at("labels").get<std::vector<std::string>>();
  c.values = matrix_from(j.at("values"));
  return c;
}

Json to_json(const AuditBundle& b) {
  Json j;
  j["schema"] = b.schema;
  j["mode"] = to_string(b.mode);
  j["plan"] = {{"folds", b.plan.folds},
               {"seeds", b.plan.seeds},
               {"validation_fraction", b.plan.validation_fraction},
               {"search_draws", b.plan.search_draws},
               {"models", b.plan.models}};

  Json datasets = Json::array();
  for (const auto& d : b.datasets) {
    Json groups = Json::array();
    for (const auto& g : d.groups) {
      groups.push_back({{"feature", g.feature}, {"labels", g.labels}, {"sizes", g.sizes}, {"reference", g.reference}});
    }
    Json runs = Json::array();
    for (const auto& r : d.runs) {
      Json winners = Json::array();
      for (const auto& w : r.winners) {
        winners.push_back({{"model", w.model},
                           {"fold", w.fold},
                           {"draw_index", w.draw_index},
                           {"params", w.params},
                           {"validation_auc", w.validation_auc},
                           {"validation_auc_imputed", w.validation_auc_imputed},
                           {"threshold", w.threshold},
                           {"threshold_fallback", w.threshold_fallback},
                           {"failed_draws", w.failed_draws}});
      }
      Json pooled = Json::object();
      for (const auto& [model, auc] : r.pooled_test_auc) pooled[model] = auc;
      runs.push_back({{"seed", r.seed}, {"winners", winners}, {"pooled_test_auc", pooled}});
    }
    datasets.push_back({{"name", d.name},
                        {"positive_meaning", d.positive_meaning},
                        {"rows", d.rows},
                        {"dropped_rows", d.dropped_rows},
                        {"features", d.features},
                        {"design_columns", d.design_columns},
                        {"groups", groups},
                        {"runs", runs}});
  }
  j["datasets"] = datasets;

  Json conditions = Json::array();
  for (const auto& c : b.conditions) {
    conditions.push_back({{"dataset", c.dataset},
                          {"feature", c.feature},
                          {"seed", c.seed},
                          {"matrix", matrix_to_json(c.matrix)},
                          {"column_distances", distances_to_json(c.column_distances)},
                          {"row_distances", distances_to_json(c.row_distances)},
                          {"column_linkage", linkage_to_json(c.column_linkage)},
                          {"row_linkage", linkage_to_json(c.row_linkage)},
                          {"full_pca", pca_to_json(c.full_pca)},
                          {"reference_model", c.reference_model},
                          {"reference_group", c.reference_group},
                          {"model_pca", pca_to_json(c.model_pca)},
                          {"projection", projection_to_json(c.projection)},
                          {"plot_models", c.plot_models},
                          {"notes", c.notes}});
  }
  j["conditions"] = conditions;

  if (b.robustness) {
    const auto& r = *b.robustness;
    Json per_seed = Json::array();
    for (const auto& m : r.per_seed) per_seed.push_back(correlation_to_json(m));
    j["robustness"] = {{"seeds", r.seeds},
                       {"per_seed", per_seed},
                       {"labels", r.summary.labels},
                       {"mean", matrix_json(r.summary.mean)},
                       {"std", matrix_json(r.summary.std)},
                       {"seed_count", r.summary.seed_count}};
  } else {
    j["robustness"] = nullptr;
  }

  Json failures = Json::array();
  for (const auto& f : b.failures) failures.push_back(failure_to_json(f));
  j["failures"] = failures;
  j["warnings"] = b.warnings;
  return j;
}

AuditBundle from_json(const Json& j) {
  AuditBundle b;
  b.schema = j.at("schema").get<std::string>();
  if (b.schema != kBundleSchema) throw parse_error("unsupported bundle schema '" + b.schema + "'");
  b.mode = run_mode_from_string(j.at("mode").get<std::string>());
  const Json& plan = j.at("plan");
  b.plan.folds = plan.at("folds").get<std::size_t>();
  b.plan.seeds = plan.at("seeds").get<std::vector<std::uint64_t>>();
  b.plan.validation_fraction = plan.at("validation_fraction").get<double>();
  b.plan.search_draws = plan.at("search_draws").get<std::size_t>();
  b.plan.models = plan.at("models").get<std::vector<std::string>>();

  for (const auto& dj : j.at("datasets")) {
    DatasetRecord d;
    d.name = dj.at("name").get<std::string>();
    d.positive_meaning = dj.at("positive_meaning").get<std::string>();
    d.rows = dj.at("rows").get<std::size_t>();
    d.dropped_rows = dj.at("dropped_rows").get<std::size_t>();
    d.features = dj.at("features").get<std::vector<std::string>>();
    d.design_columns = dj.at("design_columns").get<std::vector<std::string>>();
    for (const auto& g : dj.at("groups")) {
      d.groups.push_back({g.at("feature").get<std::string>(), g.at("labels").get<std::vector<std::string>>(),
                          g.at("sizes").get<std::vector<std::size_t>>(), g.at("reference").get<std::string>()});
    }
    for (const auto& rj : dj.at("runs")) {
      SeedRun r;
      r.seed = rj.at("seed").get<std::uint64_t>();
      for (const auto& w : rj.at("winners")) {
        r.winners.push_back({w.at("model").get<std::string>(), w.at("fold").get<std::size_t>(),
                             w.at("draw_index").get<std::size_t>(), w.at("params").get<std::string>(),
                             w.at("validation_auc").get<double>(), w.at("validation_auc_imputed").get<bool>(),
                             w.at("threshold").get<double>(), w.at("threshold_fallback").get<bool>(),
                             w.at("failed_draws").get<std::size_t>()});
      }
      for (const auto& [model, auc] : rj.at("pooled_test_auc").items()) r.pooled_test_auc[model] = auc.get<double>();
      d.runs.push_back(std::move(r));
    }
    b.datasets.push_back(std::move(d));
  }

  for (const auto& cj : j.at("conditions")) {
    ConditionRecord c;
    c.dataset = cj.at("dataset").get<std::string>();
    c.feature = cj.at("feature").get<std::string>();
    c.seed = cj.at("seed").get<std::uint64_t>();
    c.matrix = matrix_from_json(cj.at("matrix"));
    c.column_distances = distances_from_json(cj.at("column_distances"));
    c.row_distances = distances_from_json(cj.at("row_distances"));
    c.column_linkage = linkage_from_json(cj.at("column_linkage"));
    c.row_linkage = linkage_from_json(cj.at("row_linkage"));
    c.full_pca = pca_from_json(cj.at("full_pca"));
    c.reference_model = cj.at("reference_model").get<std::string>();
    c.reference_group = cj.at("reference_group").get<std::string>();
    c.model_pca = pca_from_json(cj.at("model_pca"));
    c.projection = projection_from_json(cj.at("projection"));
    c.plot_models = cj.at("plot_models").get<std::vector<std::string>>();
    c.notes = cj.at("notes").get<std::vector<std::string>>();
    b.conditions.push_back(std::move(c));
  }

  const Json& rj = j.at("robustness");
  if (!rj.is_null()) {
    RobustnessRecord r;
    r.seeds = rj.at("seeds").get<std::vector<std::uint64_t>>();
    for (const auto& m : rj.at("per_seed")) r.per_seed.push_back(correlation_from_json(m));
    r.summary.labels = rj.at("labels").get<std::vector<std::string>>();
    r.summary.mean = matrix_from(rj.at("mean"));
    r.summary.std = matrix_from(rj.at("std"));
    r.summary.seed_count = rj.at("seed_count").get<std::size_t>();
    b.robustness = std::move(r);
  }
  for (const auto& f : j.at("failures")) b.failures.push_back(failure_from_json(f));
  b.warnings = j.at("warnings").get<std::vector<std::string>>();
  return b;
}

}  // namespace

bool AuditBundle::complete() const {
  for (const auto& d : datasets) {
    for (const auto& f : d.features) {
      for (const auto seed : plan.seeds) {
        if (find_condition(d.name, f, seed) == nullptr) return false;
      }
    }
  }
  return failures.empty();
}

const ConditionRecord* AuditBundle::find_condition(std::string_view dataset, std::string_view feature,
                                                   std::uint64_t seed) const {
  for (const auto& c : conditions) {
    if (c.dataset == dataset && c.feature == feature && c.seed == seed) return &c;
  }
  return nullptr;
}

std::string bundle_to_json(const AuditBundle& bundle) { return to_json(bundle).dump(2) + "\n"; }

AuditBundle bundle_from_json(std::string_view text) {
  AuditBundle b;
  try {
    b = from_json(Json::parse(text));
  } catch (const Json::exception& e) {
    throw parse_error(std::string("malformed bundle: ") + e.what());
  }
  validate_bundle(b);
  return b;
}

void validate_bundle(const AuditBundle& bundle) {
  if (bundle.schema != kBundleSchema) throw parse_error("bundle schema tag missing or unsupported");
  for (const auto& c : bundle.conditions) {
    if (c.matrix.values.cols() != static_cast<Eigen::Index>(kMetricCount)) {
      throw parse_error("condition " + c.label() + " has a malformed matrix");
    }
    const bool clustered = c.column_linkage.leaves != 0;
    if (clustered && (c.column_linkage.leaves != kMetricCount || c.row_linkage.leaves != c.matrix.row_count())) {
      throw parse_error("condition " + c.label() + " has linkages that do not match its matrix");
    }
  }
  for (const auto& d : bundle.datasets) {
    for (const auto& f : d.features) {
      for (const auto seed : bundle.plan.seeds) {
        if (bundle.find_condition(d.name, f, seed) != nullptr) continue;
        const bool failed = std::any_of(bundle.failures.begin(), bundle.failures.end(), [&](const FailureRecord& r) {
          return r.dataset == d.name && (r.feature.empty() || r.feature == f) && (!r.seed || *r.seed == seed);
        });
        if (!failed) {
          throw parse_error("bundle lacks declared condition " + d.name + "/" + f + " seed " + std::to_string(seed));
        }
      }
    }
  }
}

std::string failures_to_json(const std::vector<FailureRecord>& failures) {
  Json arr = Json::array();
  for (const auto& f : failures) arr.push_back(failure_to_json(f));
  return Json{{"failures", arr}}.dump(2) + "\n";
}

std::string describe_params(const HyperDraw& draw) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        char buf[160];
        if constexpr (std::is_same_v<T, LogitParams>) {
          std::snprintf(buf, sizeof buf, "C=%.17g", p.c);
        } else if constexpr (std::is_same_v<T, MlpParams>) {
          std::snprintf(buf, sizeof buf, "P=%d;epochs=%d;batch=%d;l2=%.17g;lr=%.17g;momentum=%.17g",
                        p.width_multiplier, p.epochs, p.batch_size, p.l2, p.learning_rate, p.momentum);
        } else if constexpr (std::is_same_v<T, KnnParams>) {
          std::snprintf(buf, sizeof buf, "neighbors=%d;metric=%s", p.neighbors, std::string(to_string(p.metric)).c_str());
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          std::snprintf(buf, sizeof buf, "estimators=%d;max_depth=%d;min_samples_leaf=%d", p.estimators, p.max_depth,
                        p.min_samples_leaf);
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          std::snprintf(buf, sizeof buf, "max_depth=%d;min_samples_leaf=%d", p.max_depth, p.min_samples_leaf);
        } else {
          buf[0] = '\0';
        }
        return buf;
      },
      draw.params);
}

}  // namespace fairlens
