#include "fairlens/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "fairlens/csv.hpp"
#include "fairlens/error.hpp"

namespace fairlens {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.starts_with('+')) text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string> sorted_distinct(const RawTable& table, std::size_t col) {
  std::set<std::string> values;
  for (const auto& row : table.cells) values.insert(row[col]);
  return {values.begin(), values.end()};
}

}  // namespace

std::string to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::Numeric: return "numeric";
    case ColumnKind::Binary: return "binary";
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::Ordinal: return "ordinal";
  }
  return "?";
}

std::string to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::Feature: return "feature";
    case ColumnRole::Label: return "label";
    case ColumnRole::Ignore: return "ignore";
  }
  return "?";
}

std::string to_string(PositiveMeaning meaning) {
  return meaning == PositiveMeaning::Assistive ? "assistive" : "punitive";
}

const ColumnSpec* DatasetSpec::find_column(std::string_view column) const {
  for (const auto& c : columns) {
    if (c.name == column) return &c;
  }
  return nullptr;
}

void DatasetSpec::validate() const {
  if (name.empty()) throw invalid_argument("dataset spec has no name");
  std::set<std::string> seen;
  for (const auto& c : columns) {
    if (!seen.insert(c.name).second) throw invalid_argument("column '" + c.name + "' declared twice");
    if (c.kind == ColumnKind::Ordinal) {
      if (c.levels.empty()) throw invalid_argument("ordinal column '" + c.name + "' declares no levels");
      std::set<std::string> levels(c.levels.begin(), c.levels.end());
      if (levels.size() != c.levels.size()) {
        throw invalid_argument("ordinal column '" + c.name + "' has duplicate levels");
      }
    }
  }
  const ColumnSpec* label = find_column(label_column);
  if (label == nullptr) throw invalid_argument("label column '" + label_column + "' is not declared");
  if (label->role != ColumnRole::Label) {
    throw invalid_argument("label column '" + label_column + "' must have role 'label'");
  }
  if (label_positive.empty()) throw invalid_argument("dataset spec must declare label_positive");
  for (const auto& c : columns) {
    if (c.role == ColumnRole::Label && c.name != label_column) {
      throw invalid_argument("column '" + c.name + "' has role 'label' but is not the label column");
    }
  }
  if (protected_features.empty()) throw invalid_argument("dataset spec declares no protected features");
  for (const auto& p : protected_features) {
    const ColumnSpec* c = find_column(p);
    if (c == nullptr) throw invalid_argument("protected feature '" + p + "' is not declared");
    if (c->kind != ColumnKind::Categorical && c->kind != ColumnKind::Binary) {
      throw invalid_argument("protected feature '" + p + "' must be categorical or binary");
    }
    if (c->role == ColumnRole::Label) throw invalid_argument("protected feature '" + p + "' is the label");
  }
  for (const auto& [feature, group] : reference_policy.explicit_groups) {
    if (std::find(protected_features.begin(), protected_features.end(), feature) == protected_features.end()) {
      throw invalid_argument("reference group given for '" + feature + "', which is not a protected feature");
    }
  }
}

std::size_t RawTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw invalid_argument("table has no column '" + std::string(name) + "'");
}

RawTable load_dataset(const DatasetSpec& spec) {
  spec.validate();
  if (!std::filesystem::exists(spec.source_path)) {
    throw io_error("dataset file '" + spec.source_path.string() + "' does not exist");
  }
  const csv::Document doc = csv::read_file(spec.source_path);

  RawTable table;
  std::vector<std::size_t> source;
  std::vector<bool> required;
  for (const auto& c : spec.columns) {
    const std::size_t idx = doc.column(c.name);
    if (idx == csv::Document::npos) {
      throw parse_error("column '" + c.name + "' declared in spec '" + spec.name + "' is absent from " +
                        spec.source_path.string());
    }
    table.columns.push_back(c.name);
    source.push_back(idx);
    const bool is_protected = std::find(spec.protected_features.begin(), spec.protected_features.end(),
                                        c.name) != spec.protected_features.end();
    required.push_back(c.role != ColumnRole::Ignore || is_protected);
  }
  table.missing_per_column.assign(spec.columns.size(), 0);

  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    std::vector<std::string> row;
    row.reserve(spec.columns.size());
    bool drop = false;
    for (std::size_t c = 0; c < spec.columns.size(); ++c) {
      std::string cell(trim(doc.rows[r][source[c]]));
      if (cell.empty()) {
        ++table.missing_per_column[c];
        drop = drop || required[c];
        row.push_back(std::move(cell));
        continue;
      }
      const ColumnSpec& col = spec.columns[c];
      if (col.role != ColumnRole::Ignore) {
        if (col.kind == ColumnKind::Numeric) {
          double v = 0.0;
          if (!parse_double(cell, v)) {
            throw parse_error("row " + std::to_string(r + 1) + " (line " + std::to_string(doc.line_numbers[r]) +
                              "), column '" + col.name + "': cannot parse '" + cell + "' as a number");
          }
        } else if (col.kind == ColumnKind::Ordinal &&
                   std::find(col.levels.begin(), col.levels.end(), cell) == col.levels.end()) {
          throw parse_error("row " + std::to_string(r + 1) + " (line " + std::to_string(doc.line_numbers[r]) +
                            "), column '" + col.name + "': '" + cell + "' is not a declared level");
        }
      }
      row.push_back(std::move(cell));
    }
    if (drop) {
      ++table.dropped_rows;
    } else {
      table.cells.push_back(std::move(row));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------

Standardizer::Standardizer(std::vector<std::size_t> columns, std::vector<double> means, std::vector<double> stds)
    : columns_(std::move(columns)), means_(std::move(means)), stds_(std::move(stds)) {}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x, std::span<const std::size_t> columns,
                               std::span<const std::size_t> rows) {
  std::vector<std::size_t> all_rows;
  if (rows.empty()) {
    all_rows.resize(static_cast<std::size_t>(x.rows()));
    std::iota(all_rows.begin(), all_rows.end(), 0);
    rows = all_rows;
  }
  if (rows.empty()) throw invalid_argument("cannot fit normalization on zero rows");
  std::vector<double> means, stds;
  const double n = static_cast<double>(rows.size());
  for (std::size_t c : columns) {
    double sum = 0.0;
    for (std::size_t r : rows) sum += x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t r : rows) {
      const double d = x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) - mean;
      ss += d * d;
    }
    means.push_back(mean);
    stds.push_back(std::sqrt(ss / n));
  }
  return Standardizer({columns.begin(), columns.end()}, std::move(means), std::move(stds));
}

void Standardizer::apply(Eigen::MatrixXd& x) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    auto col = x.col(static_cast<Eigen::Index>(columns_[i]));
    if (stds_[i] > 0.0) {
      col = (col.array() - means_[i]) / stds_[i];
    } else {
      col.setZero();
    }
  }
}

std::vector<Normalization> Standardizer::parameters() const {
  std::vector<Normalization> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out.push_back({columns_[i], means_[i], stds_[i]});
  return out;
}

std::vector<std::size_t> Standardizer::constant_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (!(stds_[i] > 0.0)) out.push_back(columns_[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

FeatureEncoder::FeatureEncoder(const RawTable& table, const DatasetSpec& spec) {
  std::size_t offset = 0;
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    const ColumnSpec& col = spec.columns[c];
    const std::size_t src = table.column(col.name);
    if (col.role == ColumnRole::Label) {
      label_column_ = src;
      continue;
    }
    if (col.role == ColumnRole::Ignore) continue;

    Block block{src, col.kind, offset, {}};
    switch (col.kind) {
      case ColumnKind::Numeric:
        names_.push_back(col.name);
        scaled_.push_back(offset);
        offset += 1;
        break;
      case ColumnKind::Ordinal:
        block.values = col.levels;
        names_.push_back(col.name);
        scaled_.push_back(offset);
        offset += 1;
        break;
      case ColumnKind::Binary: {
        block.values = sorted_distinct(table, src);
        if (block.values.size() != 2 && table.rows() > 0) {
          throw domain_error("binary column '" + col.name + "' has " + std::to_string(block.values.size()) +
                             " observed values, expected exactly 2");
        }
        names_.push_back(col.name);
        offset += 1;
        break;
      }
      case ColumnKind::Categorical: {
        block.values = sorted_distinct(table, src);
        if (block.values.size() < 2 && table.rows() > 0) {
          throw domain_error("categorical column '" + col.name + "' has a single observed value");
        }
        for (const auto& v : block.values) names_.push_back(col.name + "=" + v);
        offset += block.values.size();
        break;
      }
    }
    blocks_.push_back(std::move(block));
  }
  label_positive_ = spec.label_positive;

  const auto label_values = sorted_distinct(table, label_column_);
  if (label_values.size() > 2) {
    throw domain_error("label column '" + spec.label_column + "' has " + std::to_string(label_values.size()) +
                       " distinct values, expected a binary label");
  }
}

Eigen::MatrixXd FeatureEncoder::encode(const RawTable& table) const {
  const auto n = static_cast<Eigen::Index>(table.rows());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(names_.size()));
  for (const Block& b : blocks_) {
    const auto off = static_cast<Eigen::Index>(b.offset);
    for (Eigen::Index r = 0; r < n; ++r) {
      const std::string& cell = table.cells[static_cast<std::size_t>(r)][b.source];
      switch (b.kind) {
        case ColumnKind::Numeric: {
          double v = 0.0;
          if (!parse_double(cell, v)) throw parse_error("cannot parse '" + cell + "' as a number");
          x(r, off) = v;
          break;
        }
        case ColumnKind::Ordinal:
        case ColumnKind::Binary:
        case ColumnKind::Categorical: {
          const auto it = std::find(b.values.begin(), b.values.end(), cell);
          if (it == b.values.end()) throw domain_error("value '" + cell + "' unseen when the encoder was built");
          const auto pos = static_cast<Eigen::Index>(it - b.values.begin());
          if (b.kind == ColumnKind::Categorical) {
            x(r, off + pos) = 1.0;
          } else {
            x(r, off) = static_cast<double>(pos);
          }
          break;
        }
      }
    }
  }
  return x;
}

std::vector<int> FeatureEncoder::encode_labels(const RawTable& table) const {
  std::vector<int> y;
  y.reserve(table.rows());
  for (const auto& row : table.cells) y.push_back(row[label_column_] == label_positive_ ? 1 : 0);
  return y;
}

EncodedDataset encode_features(const RawTable& table, const DatasetSpec& spec) {
  FeatureEncoder encoder(table, spec);
  EncodedDataset out;
  out.design = encoder.encode(table);
  out.labels = encoder.encode_labels(table);
  out.column_names = encoder.column_names();
  if (table.rows() > 0) {
    const auto scaler = Standardizer::fit(out.design, encoder.scaled_columns());
    scaler.apply(out.design);
    out.normalization = scaler.parameters();
    for (std::size_t c : scaler.constant_columns()) {
      out.warnings.push_back("column '" + out.column_names[c] + "' has zero variance; encoded as constant 0");
    }
  }
  out.groups = extract_groups(table, spec);
  if (table.dropped_rows > 0) {
    out.warnings.push_back(std::to_string(table.dropped_rows) + " rows with missing values dropped");
  }
  return out;
}

std::vector<std::size_t> GroupIndex::size_order() const {
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
    return labels[a] < labels[b];
  });
  return order;
}

std::optional<std::string> ReferencePolicy::for_feature(const std::string& feature) const {
  const auto it = explicit_groups.find(feature);
  if (it == explicit_groups.end()) return std::nullopt;
  return it->second;
}

GroupIndex make_group_index(std::string feature, std::span<const std::string> values,
                            const std::optional<std::string>& reference) {
  GroupIndex g;
  g.feature = std::move(feature);
  std::map<std::string, int> ids;
  for (const auto& v : values) ids.emplace(v, 0);
  if (ids.size() < 2) {
    throw domain_error("protected feature '" + g.feature + "' has " + std::to_string(ids.size()) +
                       " group(s); fairness comparison needs at least 2");
  }
  for (auto& [label, id] : ids) {
    id = static_cast<int>(g.labels.size());
    g.labels.push_back(label);
  }
  g.sizes.assign(g.labels.size(), 0);
  g.assignment.reserve(values.size());
  for (const auto& v : values) {
    const int id = ids.at(v);
    g.assignment.push_back(id);
    ++g.sizes[static_cast<std::size_t>(id)];
  }
  if (reference) {
    const auto it = ids.find(*reference);
    if (it == ids.end()) {
      throw domain_error("reference group '" + *reference + "' does not occur in feature '" +
                         g.feature + "'");
    }
    g.reference = static_cast<std::size_t>(it->second);
  } else {
    // labels are sorted, so the first maximal group is the lexicographically smallest
    g.reference = static_cast<std::size_t>(std::max_element(g.sizes.begin(), g.sizes.end()) - g.sizes.begin());
  }
  return g;
}

std::vector<GroupIndex> extract_groups(const RawTable& table, const DatasetSpec& spec) {
  std::vector<GroupIndex> out;
  for (const auto& feature : spec.protected_features) {
    const std::size_t col = table.column(feature);
    std::vector<std::string> values;
    values.reserve(table.rows());
    for (const auto& row : table.cells) values.push_back(row[col]);
    out.push_back(make_group_index(feature, values, spec.reference_policy.for_feature(feature)));
  }
  return out;
}

}  // namespace fairlens
