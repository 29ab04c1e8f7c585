#include "fairlens/models/search.hpp"

#include <algorithm>

namespace fairlens {

std::optional<std::size_t> best_draw(std::span<const DrawOutcome> draws) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    if (!draws[i].ok) continue;
    if (!best || draws[i].validation_auc > draws[*best].validation_auc) best = i;
  }
  return best;
}

void select_best_model(SearchReport& report) {
  std::vector<KindSearch> kept;
  for (auto& search : report.kinds) {
    search.winner = best_draw(search.draws);
    if (search.winner) {
      kept.push_back(std::move(search));
    } else {
      std::string message = "every " + std::string(to_string(search.kind)) + " draw failed; kind excluded";
      if (!search.draws.empty() && !search.draws.front().error.empty()) message += " (" + search.draws.front().error + ")";
      report.warnings.push_back(std::move(message));
    }
  }
  report.kinds = std::move(kept);
}

}  // namespace fairlens
