#include "tdtm/tm_model.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "generators.hpp"
#include "tdtm/error.hpp"

namespace tdtm {
namespace {

TEST(Booleanize, ThermometerEncoding) {
  std::vector<double> raw{5.1};
  EXPECT_EQ(booleanize(raw, {{4.5, 5.0, 5.5, 6.5}}), (Bits{1, 1, 0, 0}));
}

TEST(Booleanize, ThresholdIsStrict) {
  std::vector<double> raw{5.0};
  EXPECT_EQ(booleanize(raw, {{5.0}}), (Bits{0}));
}

TEST(Booleanize, Saturates) {
  std::vector<double> raw{9.9};
  EXPECT_EQ(booleanize(raw, {{1, 2, 3}}), (Bits{1, 1, 1}));
}

TEST(Booleanize, ColumnCountMismatchIsDimensionError) {
  std::vector<double> raw{1.0, 2.0};
  EXPECT_THROW(booleanize(raw, {{1.0}}), DimensionError);
}

TEST(Booleanize, MonotoneInRawValue) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const std::vector<std::vector<double>> th{{1, 3, 5, 7}, {2, 4, 6, 8}};
  for (int i = 0; i < 500; ++i) {
    std::vector<double> lo{u(rng), u(rng)};
    std::vector<double> hi{lo[0] + u(rng), lo[1] + u(rng)};
    auto a = booleanize(lo, th);
    auto b = booleanize(hi, th);
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_LE(a[j], b[j]);
  }
}

TEST(GenLiterals, Interleaving) {
  EXPECT_EQ(gen_literals(Bits{1, 0}), (Bits{1, 0, 0, 1}));
  EXPECT_EQ(gen_literals(Bits{0, 0, 0}), (Bits{0, 1, 0, 1, 0, 1}));
  EXPECT_EQ(gen_literals(Bits{1, 1}), (Bits{1, 0, 1, 0}));
}

TEST(GenLiterals, PairsAreComplementary) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    auto f = testgen::random_features(rng, 1 + rng() % 20);
    auto lit = gen_literals(f);
    ASSERT_EQ(lit.size(), 2 * f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
      EXPECT_EQ(lit[2 * j], f[j]);
      EXPECT_EQ(lit[2 * j] ^ lit[2 * j + 1], 1);
    }
  }
}

TEST(ModelFile, MinimalModelParses) {
  auto m = load_model(R"({"variant":"multiclass","num_features":1,"num_clauses":2,
                          "num_classes":1,"exclude_masks":["11","11"]})");
  EXPECT_EQ(m.num_features, 1u);
  EXPECT_EQ(m.polarities, (std::vector<std::int8_t>{1, -1}));
}

TEST(ModelFile, BadMaskLengthNamesField) {
  try {
    load_model(R"({"variant":"multiclass","num_features":2,"num_clauses":2,
                   "num_classes":1,"exclude_masks":["111","1111"]})");
    FAIL() << "expected an error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("exclude mask length"), std::string::npos) << e.what();
  }
}

TEST(ModelFile, OddClauseCountRejectedForMulticlass) {
  EXPECT_THROW(load_model(R"({"variant":"multiclass","num_features":1,"num_clauses":3,
                              "num_classes":1,"exclude_masks":["11","11","11"]})"),
               ConfigError);
}

TEST(ModelFile, MalformedTextIsParseError) {
  EXPECT_THROW(load_model("{not json"), ParseError);
  EXPECT_THROW(load_model(R"({"variant":"other"})"), ParseError);
  EXPECT_THROW(load_model(R"({"variant":"coalesced","num_features":1,"num_clauses":1,
                              "num_classes":1,"exclude_masks":["1x"],"weights":[[1]]})"),
               ParseError);
}

TEST(ModelFile, CoalescedWeightShapeChecked) {
  EXPECT_THROW(load_model(R"({"variant":"coalesced","num_features":1,"num_clauses":2,
                              "num_classes":2,"exclude_masks":["11","11"],
                              "weights":[[1,2]]})"),
               DimensionError);
}

TEST(ModelFile, UnbalancedPolaritiesRejected) {
  EXPECT_THROW(load_model(R"({"variant":"multiclass","num_features":1,"num_clauses":2,
                              "num_classes":1,"exclude_masks":["11","11"],
                              "polarities":[1,1]})"),
               DimensionError);
}

TEST(ModelFileProperty, RoundTrip) {
  std::mt19937_64 rng(20261019);
  for (int i = 0; i < 100; ++i) {
    const std::size_t F = 1 + rng() % 8, K = 1 + rng() % 5;
    TmModel m = i % 2 ? testgen::random_coalesced(rng, F, 1 + rng() % 9, K)
                      : testgen::random_multiclass(rng, F, 2 * (1 + rng() % 4), K);
    EXPECT_EQ(load_model(save_model(m)), m);
  }
}

TEST(ModelFile, FixturesLoad) {
  for (auto name : {"iris_multiclass.json", "iris_coalesced.json", "small_multiclass.json",
                    "small_coalesced.json", "mc_f4_c6_k3.json", "co_f4_c6_k3.json"}) {
    EXPECT_NO_THROW(load_model_file(std::string(TDTM_FIXTURES) + "/" + name)) << name;
  }
  EXPECT_THROW(load_model_file(std::string(TDTM_FIXTURES) + "/missing.json"), IoError);
}

TEST(Model, FirstClasses) {
  std::mt19937_64 rng(1);
  auto mc = testgen::random_multiclass(rng, 3, 4, 3);
  auto mc2 = mc.first_classes(2);
  EXPECT_EQ(mc2.num_classes, 2u);
  EXPECT_EQ(mc2.exclude_masks.size(), 8u);
  EXPECT_EQ(mc2.mask(1, 3), mc.mask(1, 3));
  auto co = testgen::random_coalesced(rng, 3, 5, 3);
  auto co1 = co.first_classes(1);
  EXPECT_EQ(co1.weights.size(), 1u);
  EXPECT_EQ(co1.exclude_masks, co.exclude_masks);
  EXPECT_THROW(co.first_classes(4), ConfigError);
  EXPECT_THROW(co.first_classes(0), ConfigError);
}

TEST(Dataset, BinaryCsvWithHeaderAndLabels) {
  auto s = load_dataset("x0,x1,label\n# note\n0,1,1\n\n1,1,0\n", 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].features, (Bits{0, 1}));
  EXPECT_EQ(s[0].label, 1u);
  EXPECT_EQ(s[1].label, 0u);
}

TEST(Dataset, UnlabelledRows) {
  auto s = load_dataset("1,0\n", 2);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_FALSE(s[0].label);
}

TEST(Dataset, WrongWidthOrNonBinaryRejected) {
  EXPECT_THROW(load_dataset("1,0,1,1\n", 2), ConfigError);
  EXPECT_THROW(load_dataset("1\n", 2), ConfigError);
  EXPECT_THROW(load_dataset("1,2\n", 2), ConfigError);
}

TEST(Dataset, RawIrisMatchesBinaryIris) {
  auto th = parse_thresholds(read_text_file(std::string(TDTM_FIXTURES) + "/iris_thresholds.txt"));
  auto raw = load_raw_dataset(read_text_file(std::string(TDTM_FIXTURES) + "/iris4_raw.csv"), th);
  auto bin = load_dataset_file(std::string(TDTM_FIXTURES) + "/iris4.csv", 16);
  EXPECT_EQ(raw, bin);
}

TEST(Thresholds, Parse) {
  auto th = parse_thresholds("4.5,5.0;2.8");
  ASSERT_EQ(th.size(), 2u);
  EXPECT_EQ(th[0], (std::vector<double>{4.5, 5.0}));
  EXPECT_EQ(th[1], (std::vector<double>{2.8}));
  EXPECT_THROW(parse_thresholds("a,b"), ConfigError);
}

}  // namespace
}  // namespace tdtm
