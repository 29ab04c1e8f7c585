#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairlens/models/model.hpp"

namespace fairlens {

struct DrawOutcome {
  std::size_t draw_index = 0;
  HyperDraw draw;
  bool ok = false;
  double validation_auc = 0.0;
  bool auc_imputed = false;
  std::string error;
};

struct KindSearch {
  ModelKind kind = ModelKind::Nb;
  std::vector<DrawOutcome> draws;
  std::optional<std::size_t> winner;  // position in `draws`
};

struct SearchReport {
  std::vector<KindSearch> kinds;
  std::vector<std::string> warnings;
};

/// Highest validation AUC among successful draws; ties go to the earliest.
std::optional<std::size_t> best_draw(std::span<const DrawOutcome> draws);

/// Fills every kind's winner. Kinds whose draws all failed are removed from
/// the report and a warning is recorded.
void select_best_model(SearchReport& report);

}  // namespace fairlens
