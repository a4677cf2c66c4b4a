#include "tdtm/time_domain.hpp"

#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "tdtm/error.hpp"

namespace tdtm {
namespace {

TEST(Lod, Examples) {
  EXPECT_EQ(lod_extract(13, 2, 8), (CoarseFine{3, 2, false}));
  EXPECT_EQ(lod_extract(4, 2, 8), (CoarseFine{2, 0, false}));
  const auto z = lod_extract(0, 2, 8);
  EXPECT_EQ(z.k, 0u);
  EXPECT_EQ(z.f, 0u);
  EXPECT_TRUE(z.zero);
  EXPECT_EQ(lod_extract(1, 2, 8), (CoarseFine{0, 0, false}));
}

TEST(Lod, OverflowIsDimensionError) {
  EXPECT_THROW(lod_extract(256, 2, 8), DimensionError);
  EXPECT_NO_THROW(lod_extract(255, 2, 8));
}

TEST(Lod, ReconstructExamples) {
  EXPECT_EQ(lod_reconstruct({3, 2, false}, 2), 12u);
  EXPECT_EQ(lod_reconstruct({2, 0, false}, 2), 4u);
  EXPECT_EQ(lod_reconstruct({0, 0, true}, 2), 0u);
  EXPECT_EQ(lod_reconstruct({0, 0, false}, 2), 1u);
}

TEST(Lod, CoarseFineDelayExamples) {
  TimeDomainConfig cfg;  // tau 160, e 4 -> fine unit 10
  EXPECT_EQ(coarse_fine_delay({3, 2, false}, cfg), 500u);
  EXPECT_EQ(coarse_fine_delay({0, 0, true}, cfg), 0u);
  EXPECT_EQ(coarse_fine_delay({1, 15, false}, cfg), 310u);
}

// Truncation error below 2^(k-e); exact whenever k <= e.
TEST(LodProperty, ReconstructionErrorBound) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5000; ++i) {
    const unsigned e = rng() % 8;
    const std::uint64_t v = 1 + rng() % 65535;
    const auto cf = lod_extract(v, e, 16);
    const auto r = lod_reconstruct(cf, e);
    ASSERT_LE(r, v);
    EXPECT_EQ(cf.k, 63u - static_cast<unsigned>(__builtin_clzll(v)));
    if (cf.k <= e) {
      EXPECT_EQ(r, v);
    } else {
      EXPECT_LT(v - r, std::uint64_t{1} << (cf.k - e));
    }
    EXPECT_LT(cf.f, 1u << e);
  }
}

TEST(LodProperty, DelayMonotoneInValue) {
  TimeDomainConfig cfg;
  for (unsigned e : {0u, 2u, 4u}) {
    cfg.e = e;
    SimTime prev = 0;
    for (std::uint64_t v = 0; v < 4096; ++v) {
      const SimTime d = coarse_fine_delay(lod_extract(v, e, 16), cfg);
      EXPECT_GE(d, prev) << v;
      prev = d;
    }
  }
}

TEST(SplitSigned, Examples) {
  std::vector<std::int32_t> w{2, -1, 3};
  EXPECT_EQ(split_signed(w, Bits{1, 1, 0}), (SignedSplit{1, 2}));
  EXPECT_EQ(split_signed(w, Bits{0, 0, 0}), (SignedSplit{0, 0}));
  std::vector<std::int32_t> neg{-4};
  EXPECT_EQ(split_signed(neg, Bits{1}), (SignedSplit{4, 0}));
  EXPECT_THROW(split_signed(neg, Bits{1, 0}), DimensionError);
}

TEST(SplitSignedProperty, DifferenceIsClassSum) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::int32_t> w(1 + rng() % 10);
    Bits c(w.size());
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] = static_cast<std::int32_t>(rng() % 21) - 10;
      c[j] = rng() & 1;
      if (c[j]) sum += w[j];
    }
    auto s = split_signed(w, c);
    EXPECT_EQ(static_cast<std::int64_t>(s.M) - static_cast<std::int64_t>(s.S), sum);
  }
}

TEST(Vernier, SignedFloor) {
  EXPECT_EQ(vernier_tdc(100, 100, 10).dc, 0);
  EXPECT_EQ(vernier_tdc(0, 95, 10).dc, 9);
  EXPECT_EQ(vernier_tdc(25, 0, 10).dc, -2);
  EXPECT_THROW(vernier_tdc(0, 1, 0), ConfigError);
}

TEST(Dcde, Examples) {
  EXPECT_EQ(dcde_delay({0}, 2000, 10), 2000u);
  EXPECT_EQ(dcde_delay({9}, 2000, 10), 1910u);
  EXPECT_EQ(dcde_delay({-2}, 2000, 10), 2020u);
  EXPECT_THROW(dcde_delay({200}, 2000, 10), ConfigError);
}

TEST(DcdeProperty, StrictlyDecreasingInCode) {
  for (std::int64_t dc = -50; dc < 50; ++dc) {
    EXPECT_GT(dcde_delay({dc}, 1000, 10), dcde_delay({dc + 1}, 1000, 10));
  }
}

TmModel multiclass_all_open(std::size_t C, std::size_t K) {
  TmModel m;
  m.variant = Variant::Multiclass;
  m.num_features = 1;
  m.num_clauses = C;
  m.num_classes = K;
  m.exclude_masks.assign(C * K, Bits{1, 1});
  m.polarities = default_polarities(C);
  return m;
}

TEST(Hamming, Examples) {
  auto m = multiclass_all_open(4, 3);
  TimeDomainConfig cfg;
  // Polarity order +,-,+,-.
  std::vector<ClauseVector> cv{{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, 0, 0}};
  auto d = hamming_race_delays(m, cv, cfg);
  EXPECT_EQ(d, (std::vector<SimTime>{0, 4 * cfg.tau_hamming, 2 * cfg.tau_hamming}));
}

TEST(HammingProperty, DelayTracksClassSum) {
  std::mt19937_64 rng(31);
  TimeDomainConfig cfg;
  for (int round = 0; round < 200; ++round) {
    const std::size_t C = 2 * (1 + rng() % 5), K = 1 + rng() % 5;
    auto m = testgen::random_multiclass(rng, 4, C, K);
    auto lit = gen_literals(testgen::random_features(rng, 4));
    auto cv = eval_all_clauses(m, lit);
    auto sums = multiclass_sums(m, cv);
    auto d = hamming_race_delays(m, cv, cfg);
    for (std::size_t i = 0; i < K; ++i) {
      EXPECT_EQ(static_cast<std::int64_t>(d[i]),
                (static_cast<std::int64_t>(C / 2) - sums[i]) *
                    static_cast<std::int64_t>(cfg.tau_hamming));
    }
    EXPECT_EQ(argmin_delay(d), argmax_class(sums));
  }
}

TmModel coalesced_open(std::vector<std::vector<std::int32_t>> w) {
  TmModel m;
  m.variant = Variant::Coalesced;
  m.num_features = 1;
  m.num_classes = w.size();
  m.num_clauses = w[0].size();
  m.exclude_masks.assign(m.num_clauses, Bits{1, 1});
  m.weights = std::move(w);
  return m;
}

TEST(CotmRace, IdealExample) {
  // Clause 0 alone carries the sums 5, 2, -1.
  auto m = coalesced_open({{5, 0}, {2, 0}, {-1, 0}});
  TimeDomainConfig cfg;
  cfg.mode = TdMode::Ideal;
  cfg.dcde_base = 2000;
  cfg.dcde_step = 10;
  auto r = cotm_race_delays(m, Bits{1, 0}, cfg);
  EXPECT_EQ(r.delays, (std::vector<SimTime>{1950, 1980, 2010}));
  EXPECT_EQ(r.predicted, 0u);
  EXPECT_EQ(r.oracle, 0u);
}

TEST(CotmRace, BalancedRailsGiveBaseDelay) {
  auto m = coalesced_open({{3, -3}});
  TimeDomainConfig cfg;
  cfg.dcde_base = 2000;
  for (auto d : {DcDecode::PerRail, DcDecode::IntervalLinear, DcDecode::IntervalLog}) {
    cfg.decode = d;
    auto r = cotm_race_delays(m, Bits{1, 1}, cfg);
    EXPECT_EQ(r.classes[0].dc.dc, 0);
    EXPECT_EQ(r.delays[0], 2000u) << to_string(d);
  }
}

TEST(CotmRace, SingleClassAlwaysWins) {
  auto m = coalesced_open({{-7, 2}});
  TimeDomainConfig cfg;
  auto r = cotm_race_delays(m, Bits{1, 1}, cfg);
  EXPECT_EQ(r.predicted, 0u);
  EXPECT_TRUE(r.agrees());
}

TEST(CotmRace, RejectsMulticlass) {
  auto m = multiclass_all_open(2, 2);
  EXPECT_THROW(cotm_race_delays(m, Bits{1, 1}, TimeDomainConfig{}), ConfigError);
}

TEST(CotmRace, ExplicitBaseTooSmallRejected) {
  auto m = coalesced_open({{9, -9}});
  TimeDomainConfig cfg;
  cfg.mode = TdMode::Ideal;
  cfg.dcde_base = 90;
  EXPECT_THROW(effective_dcde_base(m, cfg), ConfigError);
  cfg.dcde_base = 100;
  EXPECT_EQ(effective_dcde_base(m, cfg), 100u);
  cfg.dcde_base = 0;
  EXPECT_EQ(auto_dcde_base(m, cfg), 100u);
}

TEST(CotmRace, RailBoundAndWindow) {
  auto m = coalesced_open({{3, -5, 4}, {-1, -1, 6}});
  EXPECT_EQ(rail_bound(m), 7u);
  TimeDomainConfig cfg;  // 7 -> k 2, f 12 -> 2*160 + 12*10
  EXPECT_EQ(race_window(m, cfg), 320u + 120u + cfg.tdc_latency);
}

TEST(CotmRaceProperty, IdealAlwaysAgrees) {
  std::mt19937_64 rng(41);
  TimeDomainConfig cfg;
  cfg.mode = TdMode::Ideal;
  for (int round = 0; round < 300; ++round) {
    auto m = testgen::random_coalesced(rng, 4, 1 + rng() % 8, 1 + rng() % 6, 10);
    auto cv = eval_clauses(m, gen_literals(testgen::random_features(rng, 4)));
    auto r = cotm_race_delays(m, cv, cfg);
    ASSERT_TRUE(r.agrees());
    for (std::size_t i = 0; i < m.num_classes; ++i) EXPECT_EQ(r.classes[i].dc_used, r.classes[i].sum);
  }
}

// With every rail below 2^(e+1) the LOD is lossless and the TDC grid matches
// the fine unit, so per-rail decoding recovers the exact class sum.
TEST(CotmRaceProperty, PerRailExactWhenLodLossless) {
  std::mt19937_64 rng(43);
  TimeDomainConfig cfg;
  cfg.decode = DcDecode::PerRail;
  for (int round = 0; round < 300; ++round) {
    auto m = testgen::random_coalesced(rng, 4, 3, 1 + rng() % 5, 5);  // rails <= 15 < 32
    auto cv = eval_clauses(m, gen_literals(testgen::random_features(rng, 4)));
    auto r = cotm_race_delays(m, cv, cfg);
    for (std::size_t i = 0; i < m.num_classes; ++i) {
      ASSERT_EQ(r.classes[i].dc_used, r.classes[i].sum);
    }
    EXPECT_TRUE(r.agrees());
  }
}

// Auto-derived base keeps every delay positive in every decode and mode.
TEST(CotmRaceProperty, AutoBaseNeverThrows) {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 300; ++round) {
    TimeDomainConfig cfg;
    cfg.e = rng() % 5;
    cfg.tau = 10 << cfg.e;
    cfg.tdc_resolution = 1 + rng() % 20;
    cfg.launch_skew = rng() % 30;
    cfg.mode = rng() % 4 == 0 ? TdMode::Ideal : TdMode::Architectural;
    cfg.decode = static_cast<DcDecode>(rng() % 3);
    auto m = testgen::random_coalesced(rng, 4, 1 + rng() % 10, 1 + rng() % 5, 12);
    auto cv = eval_clauses(m, gen_literals(testgen::random_features(rng, 4)));
    EXPECT_NO_THROW(cotm_race_delays(m, cv, cfg));
  }
}

// Larger sums never produce a later arrival for a fixed negative rail.
TEST(CotmRaceProperty, DelayMonotoneInPositiveRail) {
  TimeDomainConfig cfg;
  for (auto d : {DcDecode::PerRail, DcDecode::IntervalLinear, DcDecode::IntervalLog}) {
    cfg.decode = d;
    SimTime prev = kNever;
    for (std::int32_t w = 0; w < 200; ++w) {
      auto m = coalesced_open({{w, -20}, {200, 0}});
      auto r = cotm_race_delays(m, Bits{1, 1}, cfg);
      EXPECT_LE(r.delays[0], prev) << to_string(d) << " w=" << w;
      prev = r.delays[0];
    }
  }
}

TEST(TdConfig, Validation) {
  TimeDomainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.tau = 150;  // not divisible by 16
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.tdc_resolution = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_EQ(parse_dc_decode("interval-log"), DcDecode::IntervalLog);
  EXPECT_THROW(parse_dc_decode("linear"), ConfigError);
}

TEST(ArgminDelay, TiesGoLow) {
  std::vector<SimTime> d{30, 10, 10};
  EXPECT_EQ(argmin_delay(d), 1u);
}

}  // namespace
}  // namespace tdtm
