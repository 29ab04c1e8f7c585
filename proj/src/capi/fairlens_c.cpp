#include "fairlens/fairlens.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <span>
#include <string>

#include "fairlens/bundle.hpp"
#include "fairlens/cluster.hpp"
#include "fairlens/config.hpp"
#include "fairlens/error.hpp"
#include "fairlens/io.hpp"
#include "fairlens/metrics.hpp"
#include "fairlens/pca.hpp"
#include "fairlens/pipeline.hpp"

struct fl_pca {
  fairlens::PcaModel model;
};

struct fl_bundle {
  fairlens::AuditBundle bundle;
};

namespace {

thread_local std::string last_error;

fl_status status_for(fairlens::ErrorKind kind) {
  switch (kind) {
    case fairlens::ErrorKind::InvalidArgument: return FL_ERR_INVALID_ARGUMENT;
    case fairlens::ErrorKind::Io: return FL_ERR_IO;
    case fairlens::ErrorKind::Parse: return FL_ERR_PARSE;
    case fairlens::ErrorKind::Domain: return FL_ERR_DOMAIN;
    case fairlens::ErrorKind::Internal: return FL_ERR_INTERNAL;
  }
  return FL_ERR_INTERNAL;
}

template <typename F>
fl_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return FL_OK;
  } catch (const fairlens::Error& e) {
    last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FL_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw fairlens::invalid_argument(std::string(what) + " must not be NULL");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Eigen::MatrixXd read_matrix(const double* data, std::size_t rows, std::size_t cols) {
  require(data, "matrix");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      data, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

void write_matrix(const Eigen::MatrixXd& m, double* out) {
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, m.rows(), m.cols()) = m;
}

std::vector<std::string> split_csv(const char* text) {
  std::vector<std::string> out;
  if (text == nullptr) return out;
  std::string item;
  for (const char* p = text;; ++p) {
    if (*p == ',' || *p == '\0') {
      if (!item.empty()) out.push_back(item);
      item.clear();
      if (*p == '\0') break;
    } else {
      item += *p;
    }
  }
  return out;
}

}  // namespace

extern "C" {

const char* fl_version(void) { return "1.0.0"; }

const char* fl_last_error(void) { return last_error.c_str(); }

const char* fl_status_name(fl_status status) {
  switch (status) {
    case FL_OK: return "ok";
    case FL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FL_ERR_IO: return "I/O error";
    case FL_ERR_PARSE: return "parse error";
    case FL_ERR_DOMAIN: return "domain error";
    case FL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fl_metric_name(size_t index) {
  if (index >= fairlens::kMetricCount) return nullptr;
  return fairlens::metric_name(index).data();
}

fl_status fl_confusion_at_threshold(const double* scores, const int* labels, size_t n, double t, fl_confusion* out) {
  return guarded([&] {
    require(scores, "scores");
    require(labels, "labels");
    require(out, "out");
    const auto c = fairlens::confusion_at_threshold({scores, n}, {labels, n}, t);
    *out = {c.tp, c.fp, c.tn, c.fn};
  });
}

fl_status fl_metric_vector(const fl_confusion* counts, double auc, int auc_imputed, uint64_t n_total, double* values,
                           int* imputed) {
  return guarded([&] {
    require(counts, "counts");
    require(values, "values");
    require(imputed, "imputed");
    const fairlens::ConfusionCounts c{counts->tp, counts->fp, counts->tn, counts->fn};
    const auto v = fairlens::compute_metric_vector(c, {auc, auc_imputed != 0}, n_total);
    for (std::size_t j = 0; j < fairlens::kMetricCount; ++j) {
      values[j] = v.values[j];
      imputed[j] = v.imputed[j] ? 1 : 0;
    }
  });
}

fl_status fl_roc_auc(const double* scores, const int* labels, size_t n, double* auc) {
  return guarded([&] {
    require(scores, "scores");
    require(labels, "labels");
    require(auc, "auc");
    *auc = fairlens::roc_auc({scores, n}, {labels, n}).auc;
  });
}

fl_status fl_select_threshold(const double* scores, const int* labels, size_t n, double* threshold,
                              double* balanced_accuracy, int* fallback) {
  return guarded([&] {
    require(scores, "scores");
    require(labels, "labels");
    require(threshold, "threshold");
    const auto choice = fairlens::select_threshold({scores, n}, {labels, n});
    *threshold = choice.threshold;
    if (balanced_accuracy != nullptr) *balanced_accuracy = choice.balanced_accuracy;
    if (fallback != nullptr) *fallback = choice.fallback ? 1 : 0;
  });
}

fl_status fl_correlation_distance(const double* matrix, size_t rows, size_t cols, fl_axis axis, double* out) {
  return guarded([&] {
    require(out, "out");
    if (axis != FL_AXIS_COLUMNS && axis != FL_AXIS_ROWS) throw fairlens::invalid_argument("unknown axis");
    const auto a = axis == FL_AXIS_COLUMNS ? fairlens::DistanceAxis::Columns : fairlens::DistanceAxis::Rows;
    const std::size_t n = axis == FL_AXIS_COLUMNS ? cols : rows;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    const auto d = fairlens::correlation_distance(read_matrix(matrix, rows, cols), a, labels);
    std::copy(d.values.begin(), d.values.end(), out);
  });
}

fl_status fl_upgma(const double* condensed, size_t n, fl_merge* merges) {
  return guarded([&] {
    require(condensed, "condensed");
    require(merges, "merges");
    if (n < 2) throw fairlens::invalid_argument("UPGMA needs at least two items");
    const auto linkage = fairlens::upgma(std::span<const double>(condensed, n * (n - 1) / 2), n);
    for (std::size_t i = 0; i < linkage.merges.size(); ++i) {
      const auto& m = linkage.merges[i];
      merges[i] = {m.left, m.right, m.height, m.size};
    }
  });
}

fl_status fl_pca_fit(const double* matrix, size_t rows, size_t cols, size_t k, fl_pca** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto model = fairlens::fit_pca(read_matrix(matrix, rows, cols), k, "c-api");
    *out = new fl_pca{std::move(model)};
  });
}

size_t fl_pca_components(const fl_pca* pca) { return pca == nullptr ? 0 : pca->model.component_count(); }

size_t fl_pca_dimension(const fl_pca* pca) {
  return pca == nullptr ? 0 : static_cast<size_t>(pca->model.components.cols());
}

fl_status fl_pca_ratios(const fl_pca* pca, double* out) {
  return guarded([&] {
    require(pca, "pca");
    require(out, "out");
    const auto& r = pca->model.explained_variance_ratios;
    std::copy(r.data(), r.data() + r.size(), out);
  });
}

fl_status fl_pca_eigenvectors(const fl_pca* pca, double* out) {
  return guarded([&] {
    require(pca, "pca");
    require(out, "out");
    write_matrix(pca->model.components, out);
  });
}

fl_status fl_pca_project(const fl_pca* pca, const double* matrix, size_t rows, size_t cols, double* out) {
  return guarded([&] {
    require(pca, "pca");
    require(out, "out");
    write_matrix(fairlens::project(read_matrix(matrix, rows, cols), pca->model), out);
  });
}

void fl_pca_free(fl_pca* pca) { delete pca; }

fl_status fl_run(const char* config_path, const char* overrides_json, fl_bundle** out) {
  return guarded([&] {
    require(config_path, "config_path");
    require(out, "out");
    *out = nullptr;
    fairlens::RunConfig config = fairlens::load_run_config(config_path);
    if (overrides_json != nullptr) fairlens::apply_overrides(config, overrides_json);
    *out = new fl_bundle{fairlens::run_pipeline(config)};
  });
}

fl_status fl_audit(const char* audit_json, const char* base_dir, fl_bundle** out) {
  return guarded([&] {
    require(audit_json, "audit_json");
    require(out, "out");
    *out = nullptr;
    const auto config = fairlens::parse_audit_config(audit_json, base_dir == nullptr ? "." : base_dir);
    *out = new fl_bundle{fairlens::audit_external_predictions(config)};
  });
}

fl_status fl_bundle_load(const char* path, fl_bundle** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new fl_bundle{fairlens::bundle_from_json(fairlens::read_text_file(path))};
  });
}

fl_status fl_bundle_recluster(fl_bundle* bundle) {
  return guarded([&] {
    require(bundle, "bundle");
    fairlens::recluster(bundle->bundle);
  });
}

fl_status fl_bundle_reproject(fl_bundle* bundle, const char* reference_model, const char* plot_models_csv) {
  return guarded([&] {
    require(bundle, "bundle");
    std::optional<std::string> ref;
    if (reference_model != nullptr && *reference_model != '\0') ref = reference_model;
    fairlens::reproject(bundle->bundle, ref, split_csv(plot_models_csv));
  });
}

fl_status fl_bundle_write(const fl_bundle* bundle, const char* out_dir) {
  return guarded([&] {
    require(bundle, "bundle");
    require(out_dir, "out_dir");
    fairlens::write_outputs(bundle->bundle, out_dir);
  });
}

fl_status fl_bundle_render(const fl_bundle* bundle, const char* out_dir) {
  return guarded([&] {
    require(bundle, "bundle");
    require(out_dir, "out_dir");
    fairlens::write_figures(bundle->bundle, out_dir);
  });
}

fl_status fl_bundle_to_json(const fl_bundle* bundle, char** out) {
  return guarded([&] {
    require(bundle, "bundle");
    require(out, "out");
    *out = duplicate(fairlens::bundle_to_json(bundle->bundle));
  });
}

int fl_bundle_complete(const fl_bundle* bundle) { return bundle != nullptr && bundle->bundle.complete() ? 1 : 0; }

size_t fl_bundle_condition_count(const fl_bundle* bundle) {
  return bundle == nullptr ? 0 : bundle->bundle.conditions.size();
}

size_t fl_bundle_failure_count(const fl_bundle* bundle) {
  return bundle == nullptr ? 0 : bundle->bundle.failures.size();
}

fl_status fl_bundle_failure(const fl_bundle* bundle, size_t index, char** out) {
  return guarded([&] {
    require(bundle, "bundle");
    require(out, "out");
    const auto& failures = bundle->bundle.failures;
    if (index >= failures.size()) throw fairlens::invalid_argument("failure index out of range");
    const auto& f = failures[index];
    std::string text = f.dataset.empty() ? "(all datasets)" : f.dataset;
    if (!f.feature.empty()) text += "/" + f.feature;
    if (f.seed) text += " seed " + std::to_string(*f.seed);
    text += " [" + f.stage + "]: " + f.message;
    *out = duplicate(text);
  });
}

size_t fl_bundle_warning_count(const fl_bundle* bundle) {
  return bundle == nullptr ? 0 : bundle->bundle.warnings.size();
}

fl_status fl_bundle_warning(const fl_bundle* bundle, size_t index, char** out) {
  return guarded([&] {
    require(bundle, "bundle");
    require(out, "out");
    if (index >= bundle->bundle.warnings.size()) throw fairlens::invalid_argument("warning index out of range");
    *out = duplicate(bundle->bundle.warnings[index]);
  });
}

void fl_bundle_free(fl_bundle* bundle) { delete bundle; }

void fl_string_free(char* s) { std::free(s); }

}  // extern "C"
