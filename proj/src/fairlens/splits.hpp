#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fairlens {

struct FoldPlan {
  std::size_t k = 10;
  std::vector<std::uint64_t> seeds;
  double validation_fraction = 0.10;

  void validate() const;
  /// seeds 0..count-1
  static std::vector<std::uint64_t> seed_range(std::size_t count);
};

/// One cross-validation fold. The three row sets are sorted and partition
/// [0, n).
struct SplitAssignment {
  std::uint64_t seed = 0;
  std::size_t fold = 0;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> validation_rows;
  std::vector<std::size_t> test_rows;
};

/// Validation carve-out size for a training block: round half away from zero,
/// at least 1.
std::size_t validation_size(std::size_t train_block, double fraction);

/// Shuffles [0, n) with SplitMix64(seed) and cuts it into k contiguous test
/// blocks whose sizes differ by at most one (the first n % k blocks get the
/// extra row). The validation rows of fold f are drawn from that fold's
/// training block by a second shuffle seeded with derive_seed({seed, f}).
std::vector<SplitAssignment> make_folds(std::size_t n, const FoldPlan& plan, std::uint64_t seed);

}  // namespace fairlens
