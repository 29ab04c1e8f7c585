#include "fairlens/splits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <span>
#include <string>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {

void FoldPlan::validate() const {
  if (k < 2) throw invalid_argument("fold count must be at least 2, got " + std::to_string(k));
  if (seeds.empty()) throw invalid_argument("fold plan needs at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw invalid_argument("fold plan seeds must be distinct");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw invalid_argument("validation fraction must lie in (0, 1)");
  }
}

std::vector<std::uint64_t> FoldPlan::seed_range(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
  return seeds;
}

std::size_t validation_size(std::size_t train_block, double fraction) {
  const auto size = static_cast<std::size_t>(std::round(fraction * static_cast<double>(train_block)));
  return std::max<std::size_t>(size, 1);
}

std::vector<SplitAssignment> make_folds(std::size_t n, const FoldPlan& plan, std::uint64_t seed) {
  if (plan.k < 2) throw invalid_argument("fold count must be at least 2");
  if (n < plan.k) {
    throw invalid_argument("cannot split " + std::to_string(n) + " rows into " + std::to_string(plan.k) +
                           " folds");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  rng.shuffle(std::span(order));

  const std::size_t base = n / plan.k;
  const std::size_t extra = n % plan.k;
  std::vector<SplitAssignment> folds;
  folds.reserve(plan.k);
  std::size_t start = 0;
  for (std::size_t f = 0; f < plan.k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    SplitAssignment a;
    a.seed = seed;
    a.fold = f;
    a.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                       order.begin() + static_cast<std::ptrdiff_t>(start + size));

    std::vector<std::size_t> block;
    block.reserve(n - size);
    block.insert(block.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(start));
    block.insert(block.end(), order.begin() + static_cast<std::ptrdiff_t>(start + size), order.end());
    std::sort(block.begin(), block.end());

    const std::size_t n_val = std::min(validation_size(block.size(), plan.validation_fraction), block.size() - 1);
    SplitMix64 sub(derive_seed({seed, f}));
    sub.shuffle(std::span(block));
    a.validation_rows.assign(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(n_val));
    a.train_rows.assign(block.begin() + static_cast<std::ptrdiff_t>(n_val), block.end());

    std::sort(a.test_rows.begin(), a.test_rows.end());
    std::sort(a.validation_rows.begin(), a.validation_rows.end());
    std::sort(a.train_rows.begin(), a.train_rows.end());
    folds.push_back(std::move(a));
    start += size;
  }
  return folds;
}

}  // namespace fairlens
