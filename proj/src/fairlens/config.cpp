#include "fairlens/config.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

#include "fairlens/io.hpp"
#include "fairlens/error.hpp"

namespace fairlens {

using Json = nlohmann::json;

namespace {

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw parse_error(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw parse_error(where + ": unknown key '" + key + "'");
    }
  }
}

Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw parse_error(what + " is not valid JSON: " + e.what());
  }
}

template <typename T>
T get_as(const Json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw parse_error(where + ": key '" + key + "' is missing or has the wrong type");
  }
}

ColumnKind column_kind_from_string(const std::string& s) {
  if (s == "numeric") return ColumnKind::Numeric;
  if (s == "binary") return ColumnKind::Binary;
  if (s == "categorical") return ColumnKind::Categorical;
  if (s == "ordinal") return ColumnKind::Ordinal;
  throw parse_error("unknown column kind '" + s + "'");
}

ColumnRole column_role_from_string(const std::string& s) {
  if (s == "feature") return ColumnRole::Feature;
  if (s == "label") return ColumnRole::Label;
  if (s == "ignore") return ColumnRole::Ignore;
  throw parse_error("unknown column role '" + s + "'");
}

PositiveMeaning positive_meaning_from_string(const std::string& s) {
  if (s == "assistive") return PositiveMeaning::Assistive;
  if (s == "punitive") return PositiveMeaning::Punitive;
  throw parse_error("positive_meaning must be 'assistive' or 'punitive', got '" + s + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

DatasetSpec dataset_from_json(const Json& j, const std::filesystem::path& base_dir) {
  reject_unknown_keys(
      j, {"name", "source", "label", "positive_meaning", "columns", "protected_features", "reference_groups"},
      "dataset spec");
  DatasetSpec spec;
  spec.name = get_as<std::string>(j, "name", "dataset spec");
  const std::string where = "dataset '" + spec.name + "'";
  spec.source_path = resolve(base_dir, get_as<std::string>(j, "source", where));
  const Json& label = j.at("label");
  reject_unknown_keys(label, {"column", "positive"}, where + " label");
  spec.label_column = get_as<std::string>(label, "column", where + " label");
  spec.label_positive = get_as<std::string>(label, "positive", where + " label");
  spec.positive_meaning = positive_meaning_from_string(get_as<std::string>(j, "positive_meaning", where));

  if (!j.contains("columns") || !j.at("columns").is_array()) throw parse_error(where + ": 'columns' must be an array");
  bool label_declared = false;
  for (const auto& cj : j.at("columns")) {
    reject_unknown_keys(cj, {"name", "kind", "role", "levels"}, where + " column");
    ColumnSpec c;
    c.name = get_as<std::string>(cj, "name", where + " column");
    c.kind = column_kind_from_string(get_as<std::string>(cj, "kind", where + " column '" + c.name + "'"));
    if (cj.contains("role")) c.role = column_role_from_string(get_as<std::string>(cj, "role", where));
    if (cj.contains("levels")) c.levels = get_as<std::vector<std::string>>(cj, "levels", where);
    if (c.name == spec.label_column) {
      c.role = ColumnRole::Label;
      label_declared = true;
    }
    spec.columns.push_back(std::move(c));
  }
  if (!label_declared) spec.columns.push_back({spec.label_column, ColumnKind::Binary, ColumnRole::Label, {}});

  spec.protected_features = get_as<std::vector<std::string>>(j, "protected_features", where);
  if (j.contains("reference_groups")) {
    spec.reference_policy.explicit_groups =
        get_as<std::map<std::string, std::string>>(j, "reference_groups", where);
  }
  spec.validate();
  return spec;
}

std::vector<ModelKind> models_from_json(const Json& j) {
  if (j.is_string()) return parse_model_list(j.get<std::string>());
  if (!j.is_array()) throw parse_error("'models' must be a string or an array of strings");
  std::string joined;
  for (const auto& m : j) {
    if (!m.is_string()) throw parse_error("'models' entries must be strings");
    joined += (joined.empty() ? "" : ",") + m.get<std::string>();
  }
  return parse_model_list(joined);
}

std::vector<std::uint64_t> seeds_from_json(const Json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    const auto count = j.get<std::int64_t>();
    if (count < 1) throw parse_error("'seeds' count must be at least 1");
    return FoldPlan::seed_range(static_cast<std::size_t>(count));
  }
  if (j.is_array()) {
    auto seeds = j.get<std::vector<std::uint64_t>>();
    std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size()) throw parse_error("'seeds' contains duplicates");
    return seeds;
  }
  throw parse_error("'seeds' must be a count or an array of seeds");
}

std::size_t positive_size(const Json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1) throw parse_error("'" + key + "' must be a positive integer");
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

void apply_run_keys(RunConfig& config, const Json& j) {
  if (j.contains("paper_scale") && j.at("paper_scale").get<bool>()) apply_paper_scale(config);
  if (j.contains("folds")) config.plan.k = positive_size(j.at("folds"), "folds");
  if (j.contains("seeds")) config.plan.seeds = seeds_from_json(j.at("seeds"));
  if (j.contains("validation_fraction")) {
    if (!j.at("validation_fraction").is_number()) throw parse_error("'validation_fraction' must be a number");
    config.plan.validation_fraction = j.at("validation_fraction").get<double>();
  }
  if (j.contains("models")) config.models = models_from_json(j.at("models"));
  if (j.contains("search_draws")) config.search_draws = positive_size(j.at("search_draws"), "search_draws");
  if (j.contains("jobs")) config.jobs = positive_size(j.at("jobs"), "jobs");
  if (j.contains("plot_models")) config.plot_models = j.at("plot_models").get<std::vector<std::string>>();
  if (j.contains("verbose")) config.verbose = j.at("verbose").get<bool>();
}

}  // namespace

void RunConfig::validate() const {
  if (datasets.empty()) throw invalid_argument("run config lists no datasets");
  plan.validate();
  if (models.empty()) throw invalid_argument("run config selects no models");
  if (search_draws < 1) throw invalid_argument("search_draws must be at least 1");
  if (jobs < 1) throw invalid_argument("jobs must be at least 1");
  std::set<std::string> names;
  for (const auto& d : datasets) {
    d.validate();
    if (!names.insert(d.name).second) throw invalid_argument("dataset '" + d.name + "' listed twice");
  }
  for (const auto& m : plot_models) {
    const ModelKind kind = model_kind_from_string(m);
    if (std::find(models.begin(), models.end(), kind) == models.end()) {
      throw invalid_argument("plot model '" + m + "' is not among the trained models");
    }
  }
}

void AuditConfig::validate() const {
  if (files.empty()) throw invalid_argument("audit needs at least one prediction file");
  if (features.empty()) throw invalid_argument("audit needs at least one protected feature column");
  if (fixed_threshold.has_value() == !validation_column.empty()) {
    throw invalid_argument("audit needs exactly one of a fixed threshold or a validation column");
  }
  if (fixed_threshold && !(*fixed_threshold >= 0.0 && *fixed_threshold <= 1.0)) {
    throw invalid_argument("fixed threshold must lie in [0, 1]");
  }
  std::set<std::string> models;
  for (const auto& f : files) {
    if (f.model.empty() && model_column.empty()) {
      throw invalid_argument("prediction file " + f.path.string() + " has no model name and no model column is set");
    }
    if (!f.model.empty() && !models.insert(f.model).second) {
      throw invalid_argument("model '" + f.model + "' given twice");
    }
  }
}

RunConfig desk_scale_defaults() {
  RunConfig c;
  c.plan.k = 5;
  c.plan.seeds = FoldPlan::seed_range(3);
  c.plan.validation_fraction = 0.10;
  c.search_draws = 10;
  return c;
}

void apply_paper_scale(RunConfig& config) {
  config.plan.k = 10;
  config.plan.seeds = FoldPlan::seed_range(10);
  config.search_draws = 30;
}

DatasetSpec parse_dataset_spec(std::string_view json_text, const std::filesystem::path& base_dir) {
  return dataset_from_json(parse_json(json_text, "dataset spec"), base_dir);
}

DatasetSpec load_dataset_spec(const std::filesystem::path& path) {
  return parse_dataset_spec(read_text_file(path), path.parent_path());
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  const Json j = parse_json(json_text, "run config");
  reject_unknown_keys(j,
                      {"datasets", "folds", "seeds", "validation_fraction", "models", "search_draws", "jobs",
                       "plot_models", "paper_scale", "verbose"},
                      "run config");
  RunConfig config = desk_scale_defaults();
  if (!j.contains("datasets") || !j.at("datasets").is_array()) throw parse_error("run config needs a 'datasets' array");
  for (const auto& d : j.at("datasets")) {
    if (d.is_string()) {
      config.datasets.push_back(load_dataset_spec(resolve(base_dir, d.get<std::string>())));
    } else {
      config.datasets.push_back(dataset_from_json(d, base_dir));
    }
  }
  try {
    apply_run_keys(config, j);
  } catch (const Json::exception& e) {
    throw parse_error(std::string("run config: ") + e.what());
  }
  config.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text_file(path), path.parent_path());
}

void apply_overrides(RunConfig& config, std::string_view json_text) {
  if (json_text.empty()) return;
  const Json j = parse_json(json_text, "overrides");
  reject_unknown_keys(j,
                      {"folds", "seeds", "validation_fraction", "models", "search_draws", "jobs", "plot_models",
                       "paper_scale", "verbose"},
                      "overrides");
  try {
    apply_run_keys(config, j);
  } catch (const Json::exception& e) {
    throw parse_error(std::string("overrides: ") + e.what());
  }
  config.validate();
}

AuditConfig parse_audit_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  const Json j = parse_json(json_text, "audit config");
  reject_unknown_keys(j,
                      {"dataset", "files", "features", "threshold", "validation_column", "model_column",
                       "reference_groups", "plot_models"},
                      "audit config");
  AuditConfig c;
  try {
    if (j.contains("dataset")) c.dataset = j.at("dataset").get<std::string>();
    for (const auto& f : j.at("files")) {
      reject_unknown_keys(f, {"model", "path"}, "audit file");
      c.files.push_back({f.value("model", std::string{}), resolve(base_dir, f.at("path").get<std::string>())});
    }
    c.features = j.at("features").get<std::vector<std::string>>();
    if (j.contains("threshold") && !j.at("threshold").is_null()) c.fixed_threshold = j.at("threshold").get<double>();
    if (j.contains("validation_column")) c.validation_column = j.at("validation_column").get<std::string>();
    if (j.contains("model_column")) c.model_column = j.at("model_column").get<std::string>();
    if (j.contains("reference_groups")) {
      c.reference_groups = j.at("reference_groups").get<std::map<std::string, std::string>>();
    }
    if (j.contains("plot_models")) c.plot_models = j.at("plot_models").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw parse_error(std::string("audit config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace fairlens
