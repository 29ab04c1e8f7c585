#pragma once

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

namespace testing_support {

/// Per-test scratch directory under the system temp dir, removed on exit.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = std::filesystem::temp_directory_path() /
            (std::string("fairlens_") + info->test_suite_name() + "_" + info->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support

#include "fairlens/fairmatrix.hpp"
#include "fairlens/rng.hpp"

namespace testing_support {

/// Metrics matrix built from random confusion counts, so complement pairs and
/// the other identities hold exactly as they do for trained models.
inline fairlens::MetricsMatrix random_matrix(const std::vector<std::string>& models, std::size_t groups,
                                             std::uint64_t seed, const std::string& feature = "f") {
  using namespace fairlens;
  SplitMix64 rng(seed);
  std::vector<std::string> values;
  for (std::size_t g = 0; g < groups; ++g) {
    // Distinct sizes give a stable row order: g0 largest.
    for (std::size_t i = 0; i < groups - g + 1; ++i) values.push_back("g" + std::to_string(g));
  }
  const GroupIndex index = make_group_index(feature, values);
  std::vector<ModelGroupMetrics> per_model;
  for (const auto& model : models) {
    ModelGroupMetrics mg{model, {}};
    for (std::size_t g = 0; g < groups; ++g) {
      const ConfusionCounts c{5 + rng.below(60), 5 + rng.below(60), 5 + rng.below(60), 5 + rng.below(60)};
      mg.by_group.push_back(compute_metric_vector(c, {rng.uniform(0.55, 0.95), false}, 2000));
    }
    per_model.push_back(std::move(mg));
  }
  return assemble_matrix(per_model, index, {"toy", feature, seed, "micro"});
}

}  // namespace testing_support
