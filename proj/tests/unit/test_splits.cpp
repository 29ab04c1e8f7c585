#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"
#include "fairlens/splits.hpp"

using namespace fairlens;

TEST(Rng, SplitMix64ReferenceStream) {
  // First outputs for seed 0 of the published reference implementation.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(Rng, BelowStaysInRangeAndShufflePermutes) {
  SplitMix64 rng(3);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(7), 7u);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(std::span(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(Rng, DeriveSeedIsOrderSensitive) {
  EXPECT_NE(derive_seed({1, 2}), derive_seed({2, 1}));
  EXPECT_EQ(derive_seed({1, 2}), derive_seed({1, 2}));
}

TEST(Splits, HundredRowsTenFolds) {
  FoldPlan plan;
  plan.k = 10;
  plan.seeds = {0};
  const auto folds = make_folds(100, plan, 0);
  ASSERT_EQ(folds.size(), 10u);
  for (const auto& f : folds) {
    EXPECT_EQ(f.test_rows.size(), 10u);
    EXPECT_EQ(f.validation_rows.size(), 9u);
    EXPECT_EQ(f.train_rows.size(), 81u);
  }
}

TEST(Splits, LeaveOneOut) {
  FoldPlan plan;
  plan.k = 10;
  plan.seeds = {0};
  for (const auto& f : make_folds(10, plan, 4)) EXPECT_EQ(f.test_rows.size(), 1u);
}

TEST(Splits, PartitionsAndCoversEveryRow) {
  FoldPlan plan;
  plan.k = 7;
  plan.seeds = {5};
  const std::size_t n = 103;
  const auto folds = make_folds(n, plan, 5);
  std::vector<int> tested(n, 0);
  for (const auto& f : folds) {
    std::set<std::size_t> all;
    for (auto r : f.train_rows) all.insert(r);
    for (auto r : f.validation_rows) all.insert(r);
    for (auto r : f.test_rows) {
      all.insert(r);
      ++tested[r];
    }
    EXPECT_EQ(all.size(), n);
    EXPECT_TRUE(std::is_sorted(f.test_rows.begin(), f.test_rows.end()));
    EXPECT_GE(f.test_rows.size(), n / 7);
    EXPECT_LE(f.test_rows.size(), n / 7 + 1);
  }
  for (auto t : tested) EXPECT_EQ(t, 1);
}

TEST(Splits, DeterministicPerSeed) {
  FoldPlan plan;
  plan.k = 5;
  plan.seeds = {1, 2};
  const auto a = make_folds(60, plan, 1);
  const auto b = make_folds(60, plan, 1);
  const auto c = make_folds(60, plan, 2);
  for (std::size_t f = 0; f < a.size(); ++f) {
    EXPECT_EQ(a[f].test_rows, b[f].test_rows);
    EXPECT_EQ(a[f].validation_rows, b[f].validation_rows);
  }
  EXPECT_NE(a[0].test_rows, c[0].test_rows);
}

TEST(Splits, InvalidPlans) {
  FoldPlan plan;
  plan.k = 5;
  plan.seeds = {0};
  EXPECT_THROW(make_folds(4, plan, 0), Error);
  plan.k = 1;
  EXPECT_THROW(plan.validate(), Error);
  plan.k = 5;
  plan.validation_fraction = 1.0;
  EXPECT_THROW(plan.validate(), Error);
  plan.validation_fraction = 0.1;
  plan.seeds = {1, 1};
  EXPECT_THROW(plan.validate(), Error);
}

TEST(Splits, ValidationSizeRounding) {
  EXPECT_EQ(validation_size(90, 0.1), 9u);
  EXPECT_EQ(validation_size(85, 0.1), 9u);  // 8.5 rounds away from zero
  EXPECT_EQ(validation_size(3, 0.1), 1u);
}
