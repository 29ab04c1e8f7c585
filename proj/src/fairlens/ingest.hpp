#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairlens {

enum class ColumnKind { Numeric, Binary, Categorical, Ordinal };
enum class ColumnRole { Feature, Label, Ignore };
enum class PositiveMeaning { Assistive, Punitive };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  ColumnRole role = ColumnRole::Feature;
  std::vector<std::string> levels;  // ordinal only, lowest first
};

/// Which group the aligned PCA plot is centered on, per protected feature.
/// Features without an explicit entry use the largest group.
struct ReferencePolicy {
  std::map<std::string, std::string> explicit_groups;

  std::optional<std::string> for_feature(const std::string& feature) const;
};

struct DatasetSpec {
  std::string name;
  std::filesystem::path source_path;
  std::vector<ColumnSpec> columns;
  std::string label_column;
  std::string label_positive;  // raw label value encoded as 1
  PositiveMeaning positive_meaning = PositiveMeaning::Punitive;
  std::vector<std::string> protected_features;
  ReferencePolicy reference_policy;

  const ColumnSpec* find_column(std::string_view column) const;
  /// Throws on any violated invariant (missing label/protected columns,
  /// protected feature not categorical/binary, duplicate ordinal levels...).
  void validate() const;
};

/// Declared columns only, in declaration order. Rows with a missing value in
/// any feature, label or protected column have already been dropped.
struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> cells;  // row-major
  std::vector<std::size_t> missing_per_column;  // counted before dropping
  std::size_t dropped_rows = 0;

  std::size_t rows() const { return cells.size(); }
  std::size_t column(std::string_view name) const;
};

struct Normalization {
  std::size_t column = 0;  // index into the design matrix
  double mean = 0.0;
  double std = 1.0;
};

/// Group assignment for one protected feature. `labels` is sorted
/// lexicographically and `assignment[row]` indexes into it.
struct GroupIndex {
  std::string feature;
  std::vector<std::string> labels;
  std::vector<int> assignment;
  std::vector<std::size_t> sizes;
  std::size_t reference = 0;

  const std::string& reference_label() const { return labels.at(reference); }
  std::size_t group_count() const { return labels.size(); }
  /// Group ids ordered by descending size, then label.
  std::vector<std::size_t> size_order() const;
};

struct EncodedDataset {
  Eigen::MatrixXd design;
  std::vector<int> labels;
  std::vector<GroupIndex> groups;
  std::vector<std::string> column_names;
  std::vector<Normalization> normalization;
  std::vector<std::string> warnings;
};

/// Column-wise z-scoring with population standard deviation. A column with
/// zero variance maps to constant 0.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<std::size_t> columns, std::vector<double> means, std::vector<double> stds);

  /// Fits on the given rows (all rows when `rows` is empty).
  static Standardizer fit(const Eigen::MatrixXd& x, std::span<const std::size_t> columns,
                          std::span<const std::size_t> rows = {});

  void apply(Eigen::MatrixXd& x) const;
  std::vector<Normalization> parameters() const;
  /// Columns whose fitted variance was zero.
  std::vector<std::size_t> constant_columns() const;

 private:
  std::vector<std::size_t> columns_;
  std::vector<double> means_;
  std::vector<double> stds_;
};

/// Maps raw table cells to numbers: binary to {0,1} (lexicographically
/// smaller value is 0), categorical to one-hot over the sorted observed values,
/// ordinal to its level rank, numeric parsed. Numeric and ordinal columns are
/// left unscaled and listed in `scaled_columns()` so a Standardizer can be fit
/// on any row subset.
class FeatureEncoder {
 public:
  FeatureEncoder(const RawTable& table, const DatasetSpec& spec);

  Eigen::MatrixXd encode(const RawTable& table) const;
  std::vector<int> encode_labels(const RawTable& table) const;

  const std::vector<std::string>& column_names() const { return names_; }
  const std::vector<std::size_t>& scaled_columns() const { return scaled_; }

 private:
  struct Block {
    std::size_t source = 0;
    ColumnKind kind = ColumnKind::Numeric;
    std::size_t offset = 0;
    std::vector<std::string> values;  // binary/categorical: sorted observed values; ordinal: levels
  };
  std::vector<Block> blocks_;
  std::vector<std::string> names_;
  std::vector<std::size_t> scaled_;
  std::size_t label_column_ = 0;
  std::string label_positive_;
};

RawTable load_dataset(const DatasetSpec& spec);

/// Diagnostic whole-dataset encoding: normalization fit on every row.
EncodedDataset encode_features(const RawTable& table, const DatasetSpec& spec);

std::vector<GroupIndex> extract_groups(const RawTable& table, const DatasetSpec& spec);

/// Groups for a single column of string values, reference resolved by policy.
GroupIndex make_group_index(std::string feature, std::span<const std::string> values,
                            const std::optional<std::string>& reference = std::nullopt);

std::string to_string(ColumnKind kind);
std::string to_string(ColumnRole role);
std::string to_string(PositiveMeaning meaning);

}  // namespace fairlens
