// Command-line front end. Talks to the library only through fairlens.h.
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fairlens/fairlens.h"

namespace {

constexpr int kExitIncomplete = 2;
constexpr int kExitError = 1;

std::string default_out_dir() {
  const char* env = std::getenv("FAIRLENS_OUT");
  return env != nullptr && *env != '\0' ? env : "out";
}

int report_error(const char* what, fl_status status) {
  std::cerr << "fairlens: " << what << " failed (" << fl_status_name(status) << "): " << fl_last_error() << '\n';
  return kExitError;
}

std::string take_string(char* s) {
  std::string out = s == nullptr ? "" : s;
  fl_string_free(s);
  return out;
}

/// Prints warnings and failures; returns the process exit code.
int summarize(const fl_bundle* bundle, const std::string& out_dir) {
  for (std::size_t i = 0; i < fl_bundle_warning_count(bundle); ++i) {
    char* w = nullptr;
    if (fl_bundle_warning(bundle, i, &w) == FL_OK) std::cerr << "warning: " << take_string(w) << '\n';
  }
  const std::size_t failures = fl_bundle_failure_count(bundle);
  for (std::size_t i = 0; i < failures; ++i) {
    char* f = nullptr;
    if (fl_bundle_failure(bundle, i, &f) == FL_OK) std::cerr << "failed: " << take_string(f) << '\n';
  }
  std::cerr << fl_bundle_condition_count(bundle) << " conditions written to " << out_dir << '\n';
  if (fl_bundle_complete(bundle) == 0) {
    std::cerr << "incomplete run; see " << (std::filesystem::path(out_dir) / "failures.json").string() << '\n';
    return kExitIncomplete;
  }
  return 0;
}

struct Bundle {
  fl_bundle* handle = nullptr;
  ~Bundle() { fl_bundle_free(handle); }
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairlens: group-fairness audit across metrics, models and groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fl_version());

  // run
  auto* run = app.add_subcommand("run", "Train the model zoo and audit every dataset, feature and seed");
  std::string run_config;
  std::optional<std::size_t> folds, seeds, search_draws, jobs;
  std::optional<double> validation_fraction;
  std::vector<std::string> models, plot_models;
  bool paper_scale = false, quiet = false;
  std::string run_out = default_out_dir();
  run->add_option("--config", run_config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--folds", folds, "Cross-validation folds K (desk default 5)")->check(CLI::PositiveNumber);
  run->add_option("--seeds", seeds, "Number of seeds; seeds 0..S-1 (desk default 3)")->check(CLI::PositiveNumber);
  run->add_option("--validation-fraction", validation_fraction, "Share of each training block held out for validation")
      ->check(CLI::Range(0.0, 1.0));
  run->add_option("--models", models, "Model kinds: logit,mlp,knn,rf,tree,nb")->delimiter(',');
  run->add_option("--search-draws", search_draws, "Random-search draws per kind (desk default 10)")
      ->check(CLI::PositiveNumber);
  run->add_option("--jobs", jobs, "Parallel training jobs")->check(CLI::PositiveNumber);
  run->add_flag("--paper-scale", paper_scale, "10 seeds, 10 folds, 30 draws; explicit flags still win");
  run->add_option("--plot-models", plot_models, "Models drawn in figures (default: top two by pooled test AUC)")
      ->delimiter(',');
  run->add_option("--out", run_out, "Output directory (default $FAIRLENS_OUT or ./out)");
  run->add_flag("--quiet", quiet, "No progress messages");

  // audit
  auto* audit = app.add_subcommand("audit", "Audit externally produced prediction scores (no training)");
  std::string audit_config;
  std::vector<std::string> predictions, features, references;
  std::optional<double> threshold;
  std::string validation_column, model_column, dataset_name = "external";
  std::vector<std::string> audit_plot_models;
  std::string audit_out = default_out_dir();
  audit->add_option("--config", audit_config, "Audit config (JSON); replaces the flags below")
      ->check(CLI::ExistingFile);
  audit->add_option("--predictions", predictions,
                    "MODEL=PATH per prediction CSV (y_true, y_score, group columns), or PATH with --model-column");
  audit->add_option("--features", features, "Protected feature columns")->delimiter(',');
  audit->add_option("--threshold", threshold, "Fixed decision threshold")->check(CLI::Range(0.0, 1.0));
  audit->add_option("--validation-column", validation_column,
                    "0/1 column; flagged rows select the threshold and are not audited");
  audit->add_option("--model-column", model_column, "Column naming the model of each row");
  audit->add_option("--reference", references, "FEATURE=GROUP reference group for the aligned PCA");
  audit->add_option("--dataset", dataset_name, "Dataset name used in outputs");
  audit->add_option("--plot-models", audit_plot_models, "Models drawn in figures")->delimiter(',');
  audit->add_option("--out", audit_out, "Output directory (default $FAIRLENS_OUT or ./out)");

  // cluster / pca / report
  std::string cluster_bundle, cluster_out = default_out_dir();
  auto* cluster = app.add_subcommand("cluster", "Recompute distances, linkages and robustness of a bundle");
  cluster->add_option("--bundle", cluster_bundle, "Bundle to read (default <out>/bundle.json)");
  cluster->add_option("--out", cluster_out, "Output directory (default $FAIRLENS_OUT or ./out)");

  std::string pca_bundle, pca_out = default_out_dir(), reference_model;
  std::vector<std::string> pca_plot_models;
  auto* pca = app.add_subcommand("pca", "Refit the reference-aligned PCA of a bundle");
  pca->add_option("--bundle", pca_bundle, "Bundle to read (default <out>/bundle.json)");
  pca->add_option("--reference-model", reference_model, "Model whose matrix defines the axes");
  pca->add_option("--plot-models", pca_plot_models, "Models drawn in figures")->delimiter(',');
  pca->add_option("--out", pca_out, "Output directory (default $FAIRLENS_OUT or ./out)");

  std::string report_bundle, report_out = default_out_dir();
  auto* report = app.add_subcommand("report", "Re-render figures and CSVs from a bundle");
  report->add_option("--bundle", report_bundle, "Bundle to read (default <out>/bundle.json)");
  report->add_option("--out", report_out, "Output directory (default $FAIRLENS_OUT or ./out)");

  CLI11_PARSE(app, argc, argv);

  Bundle bundle;
  if (run->parsed()) {
    nlohmann::json overrides = nlohmann::json::object();
    if (paper_scale) overrides["paper_scale"] = true;
    if (folds) overrides["folds"] = *folds;
    if (seeds) overrides["seeds"] = *seeds;
    if (validation_fraction) overrides["validation_fraction"] = *validation_fraction;
    if (!models.empty()) overrides["models"] = join(models);
    if (search_draws) overrides["search_draws"] = *search_draws;
    if (jobs) overrides["jobs"] = *jobs;
    if (!plot_models.empty()) overrides["plot_models"] = plot_models;
    overrides["verbose"] = !quiet;
    const fl_status s = fl_run(run_config.c_str(), overrides.dump().c_str(), &bundle.handle);
    if (s != FL_OK) return report_error("run", s);
    if (const fl_status w = fl_bundle_write(bundle.handle, run_out.c_str()); w != FL_OK) {
      return report_error("writing outputs", w);
    }
    return summarize(bundle.handle, run_out);
  }

  if (audit->parsed()) {
    std::string json_text;
    std::string base_dir = ".";
    if (!audit_config.empty()) {
      std::ifstream in(audit_config);
      std::stringstream buffer;
      buffer << in.rdbuf();
      json_text = buffer.str();
      base_dir = std::filesystem::path(audit_config).parent_path().string();
      if (base_dir.empty()) base_dir = ".";
    } else {
      nlohmann::json cfg;
      cfg["dataset"] = dataset_name;
      cfg["files"] = nlohmann::json::array();
      for (const auto& p : predictions) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) {
          cfg["files"].push_back({{"path", p}});
        } else {
          cfg["files"].push_back({{"model", p.substr(0, eq)}, {"path", p.substr(eq + 1)}});
        }
      }
      cfg["features"] = features;
      if (threshold) cfg["threshold"] = *threshold;
      if (!validation_column.empty()) cfg["validation_column"] = validation_column;
      if (!model_column.empty()) cfg["model_column"] = model_column;
      nlohmann::json refs = nlohmann::json::object();
      for (const auto& r : references) {
        const auto eq = r.find('=');
        if (eq == std::string::npos) {
          std::cerr << "fairlens: --reference expects FEATURE=GROUP, got '" << r << "'\n";
          return kExitError;
        }
        refs[r.substr(0, eq)] = r.substr(eq + 1);
      }
      cfg["reference_groups"] = refs;
      if (!audit_plot_models.empty()) cfg["plot_models"] = audit_plot_models;
      json_text = cfg.dump();
    }
    const fl_status s = fl_audit(json_text.c_str(), base_dir.c_str(), &bundle.handle);
    if (s != FL_OK) return report_error("audit", s);
    if (const fl_status w = fl_bundle_write(bundle.handle, audit_out.c_str()); w != FL_OK) {
      return report_error("writing outputs", w);
    }
    return summarize(bundle.handle, audit_out);
  }

  auto load = [&](std::string path, const std::string& out) {
    if (path.empty()) path = (std::filesystem::path(out) / "bundle.json").string();
    return fl_bundle_load(path.c_str(), &bundle.handle);
  };

  if (cluster->parsed()) {
    if (const fl_status s = load(cluster_bundle, cluster_out); s != FL_OK) return report_error("loading bundle", s);
    if (const fl_status s = fl_bundle_recluster(bundle.handle); s != FL_OK) return report_error("cluster", s);
    if (const fl_status s = fl_bundle_write(bundle.handle, cluster_out.c_str()); s != FL_OK) {
      return report_error("writing outputs", s);
    }
    return summarize(bundle.handle, cluster_out);
  }

  if (pca->parsed()) {
    if (const fl_status s = load(pca_bundle, pca_out); s != FL_OK) return report_error("loading bundle", s);
    const std::string plots = join(pca_plot_models);
    if (const fl_status s = fl_bundle_reproject(bundle.handle, reference_model.empty() ? nullptr : reference_model.c_str(),
                                                plots.empty() ? nullptr : plots.c_str());
        s != FL_OK) {
      return report_error("pca", s);
    }
    if (const fl_status s = fl_bundle_write(bundle.handle, pca_out.c_str()); s != FL_OK) {
      return report_error("writing outputs", s);
    }
    return summarize(bundle.handle, pca_out);
  }

  if (report->parsed()) {
    if (const fl_status s = load(report_bundle, report_out); s != FL_OK) return report_error("loading bundle", s);
    if (const fl_status s = fl_bundle_render(bundle.handle, report_out.c_str()); s != FL_OK) {
      return report_error("report", s);
    }
    return summarize(bundle.handle, report_out);
  }
  return kExitError;
}
