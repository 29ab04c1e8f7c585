#include <gtest/gtest.h>

#include <cmath>

#include "fairlens/csv.hpp"
#include "fairlens/error.hpp"
#include "fairlens/ingest.hpp"
#include "test_support.hpp"

using namespace fairlens;

namespace {

DatasetSpec toy_spec(const std::filesystem::path& source) {
  DatasetSpec spec;
  spec.name = "toy";
  spec.source_path = source;
  spec.columns = {
      {"x", ColumnKind::Numeric, ColumnRole::Feature, {}},
      {"level", ColumnKind::Ordinal, ColumnRole::Feature, {"low", "medium", "high"}},
      {"color", ColumnKind::Categorical, ColumnRole::Feature, {}},
      {"sex", ColumnKind::Binary, ColumnRole::Feature, {}},
      {"y", ColumnKind::Binary, ColumnRole::Label, {}},
  };
  spec.label_column = "y";
  spec.label_positive = "yes";
  spec.protected_features = {"sex"};
  return spec;
}

const char* kToyCsv =
    "x,level,color,sex,y\n"
    "1,low,red,M,yes\n"
    "2,medium,green,F,no\n"
    "3,high,blue,M,yes\n";

}  // namespace

TEST(Csv, QuotedFieldsAndLineNumbers) {
  const auto doc = csv::parse("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\n\"multi\nline\",2\n3,4\n");
  ASSERT_EQ(doc.rows.size(), 3u);
  EXPECT_EQ(doc.rows[0][0], "x,1");
  EXPECT_EQ(doc.rows[0][1], "say \"hi\"");
  EXPECT_EQ(doc.rows[1][0], "multi\nline");
  EXPECT_EQ(doc.line_numbers[0], 2u);
  EXPECT_EQ(doc.line_numbers[1], 3u);
  EXPECT_EQ(doc.line_numbers[2], 5u);
  EXPECT_EQ(doc.column("b"), 1u);
  EXPECT_EQ(doc.column("c"), csv::Document::npos);
}

TEST(Csv, RaggedRecordIsRejected) {
  EXPECT_THROW(csv::parse("a,b\n1\n"), Error);
}

TEST(Csv, EscapeQuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv::escape("plain"), "plain");
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape("q\""), "\"q\"\"\"");
}

TEST(Ingest, EncodesEveryColumnKind) {
  testing_support::TempDir dir;
  const auto spec = toy_spec(dir.write("toy.csv", kToyCsv));
  const auto table = load_dataset(spec);
  ASSERT_EQ(table.rows(), 3u);
  const auto enc = encode_features(table, spec);
  // x, level, color one-hot (blue, green, red), sex
  ASSERT_EQ(enc.design.cols(), 6);
  const double z = std::sqrt(1.5);
  EXPECT_NEAR(enc.design(0, 0), -z, 1e-12);
  EXPECT_NEAR(enc.design(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(enc.design(2, 0), z, 1e-12);
  EXPECT_NEAR(enc.design(0, 1), -z, 1e-12);  // ordinal rank 0,1,2 z-scored
  EXPECT_NEAR(enc.design(2, 1), z, 1e-12);
  for (Eigen::Index r = 0; r < 3; ++r) EXPECT_DOUBLE_EQ(enc.design.row(r).segment(2, 3).sum(), 1.0);
  EXPECT_EQ(enc.design(0, 5), 1.0);  // F < M so M encodes to 1
  EXPECT_EQ(enc.design(1, 5), 0.0);
  EXPECT_EQ(enc.labels, (std::vector<int>{1, 0, 1}));
  ASSERT_EQ(enc.groups.size(), 1u);
  EXPECT_EQ(enc.groups[0].labels, (std::vector<std::string>{"F", "M"}));
  EXPECT_EQ(enc.groups[0].reference_label(), "M");
}

TEST(Ingest, ZScoreUsesPopulationStd) {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  const std::vector<std::size_t> cols{0};
  Standardizer::fit(x, cols).apply(x);
  EXPECT_NEAR(x(0, 0), -1.2247448713915890, 1e-12);
  EXPECT_NEAR(x(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(x(2, 0), 1.2247448713915890, 1e-12);
}

TEST(Ingest, ConstantColumnBecomesZeroWithWarning) {
  testing_support::TempDir dir;
  const auto spec = toy_spec(dir.write("toy.csv",
                                       "x,level,color,sex,y\n5,low,red,M,yes\n5,high,blue,F,no\n"));
  const auto enc = encode_features(load_dataset(spec), spec);
  EXPECT_EQ(enc.design(0, 0), 0.0);
  EXPECT_EQ(enc.design(1, 0), 0.0);
  ASSERT_FALSE(enc.warnings.empty());
  EXPECT_NE(enc.warnings[0].find("zero variance"), std::string::npos);
}

TEST(Ingest, UnparsableNumberNamesRowAndColumn) {
  testing_support::TempDir dir;
  const auto spec = toy_spec(dir.write("toy.csv", "x,level,color,sex,y\n1,low,red,M,yes\nabc,low,red,F,no\n"));
  try {
    load_dataset(spec);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'x'"), std::string::npos) << msg;
  }
}

TEST(Ingest, EmptyTableLoadsWithZeroRows) {
  testing_support::TempDir dir;
  const auto spec = toy_spec(dir.write("toy.csv", "x,level,color,sex,y\n"));
  EXPECT_EQ(load_dataset(spec).rows(), 0u);
}

TEST(Ingest, MissingCellsDropRows) {
  testing_support::TempDir dir;
  const auto spec = toy_spec(dir.write("toy.csv", std::string(kToyCsv) + ",low,red,M,no\n4,low,red,F,no\n"));
  const auto table = load_dataset(spec);
  EXPECT_EQ(table.rows(), 4u);
  EXPECT_EQ(table.dropped_rows, 1u);
  EXPECT_EQ(table.missing_per_column[0], 1u);
}

TEST(Ingest, SingleValuedCategoricalIsRejected) {
  testing_support::TempDir dir;
  const auto spec = toy_spec(dir.write("toy.csv", "x,level,color,sex,y\n1,low,red,M,yes\n2,low,red,F,no\n"));
  EXPECT_THROW(encode_features(load_dataset(spec), spec), Error);
}

TEST(Ingest, SpecValidation) {
  auto spec = toy_spec("unused.csv");
  spec.protected_features = {"x"};
  EXPECT_THROW(spec.validate(), Error);
  spec = toy_spec("unused.csv");
  spec.protected_features = {"missing"};
  EXPECT_THROW(spec.validate(), Error);
  spec = toy_spec("unused.csv");
  spec.columns[1].levels = {"low", "low"};
  EXPECT_THROW(spec.validate(), Error);
}

TEST(Groups, LargestGroupIsReferenceAndTiesGoToSmallestLabel) {
  const std::vector<std::string> v{"b", "a", "c", "c", "b"};
  const auto g = make_group_index("f", v);
  EXPECT_EQ(g.labels, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(g.sizes, (std::vector<std::size_t>{1, 2, 2}));
  EXPECT_EQ(g.reference_label(), "b");
  EXPECT_EQ(g.size_order(), (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_EQ(g.assignment, (std::vector<int>{1, 0, 2, 2, 1}));
}

TEST(Groups, ExplicitReferenceAndSingleGroup) {
  const std::vector<std::string> v{"x", "y", "y"};
  EXPECT_EQ(make_group_index("f", v, std::string("x")).reference_label(), "x");
  EXPECT_THROW(make_group_index("f", v, std::string("z")), Error);
  const std::vector<std::string> one{"x", "x"};
  EXPECT_THROW(make_group_index("f", one), Error);
}
