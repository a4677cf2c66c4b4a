#include "tdtm/async_control.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "tdtm/error.hpp"

namespace tdtm {
namespace {

TEST(ClickFire, Condition) {
  EXPECT_TRUE(click_fire(1, 0, 0, 0));
  EXPECT_FALSE(click_fire(0, 0, 0, 0));
  EXPECT_FALSE(click_fire(1, 0, 1, 0));
  EXPECT_TRUE(click_fire(0, 1, 1, 1));
}

TEST(CElement, TruthTable) {
  for (bool prev : {false, true}) {
    EXPECT_FALSE(c_element(0, 0, prev));
    EXPECT_TRUE(c_element(1, 1, prev));
    EXPECT_EQ(c_element(0, 1, prev), prev);
    EXPECT_EQ(c_element(1, 0, prev), prev);
  }
}

TEST(CElementGate, FollowsAgreementAndHolds) {
  Kernel k;
  auto a = k.add_signal("t", "a");
  auto b = k.add_signal("t", "b");
  auto c = k.add_signal("t", "c");
  CElementGate gate(k, a, b, c, 5);
  k.schedule(a, true, 10);
  k.run();
  EXPECT_FALSE(k.value(c));
  k.schedule(b, true, 20);
  k.run();
  EXPECT_TRUE(k.value(c));
  EXPECT_EQ(k.signal(c).last_transition, 25u);
  k.schedule(a, false, 30);
  k.run();
  EXPECT_TRUE(k.value(c));
  k.schedule(b, false, 40);
  k.run();
  EXPECT_FALSE(k.value(c));
}

// Offers tokens whenever the input side is free and acknowledges every output
// after a per-token sink delay.
struct Harness {
  Kernel k;
  std::unique_ptr<ClickPipeline> p;
  std::vector<std::vector<SimTime>> fire_times;
  std::vector<std::uint64_t> to_send;
  std::vector<SimTime> sink_delays;
  std::size_t sent = 0, acked = 0;
  SimTime offer_gap = 0;

  explicit Harness(PipelineConfig cfg = {}) {
    p = build_pipeline(k, cfg);
    fire_times.resize(p->size());
    p->on_fire([this](std::size_t st, std::uint64_t) { fire_times[st].push_back(k.now()); });
    k.on_edge(p->in_ack(), Edge::Any, [this](const Signal&) { offer(); });
    k.on_edge(p->out_req(), Edge::Any, [this](const Signal&) {
      const SimTime d = acked < sink_delays.size() ? sink_delays[acked] : 10;
      ++acked;
      k.schedule(p->out_ack(), !k.value(p->out_ack()), k.now() + d);
    });
  }

  void offer() {
    if (sent >= to_send.size()) return;
    if (k.value(p->in_req()) != k.value(p->in_ack())) return;
    p->set_input_token(to_send[sent++]);
    k.schedule(p->in_req(), !k.value(p->in_req()), k.now() + offer_gap);
  }
};

TEST(Pipeline, OneTokenFiresEachStageOnceInOrder) {
  Harness h;
  h.to_send = {7};
  h.offer();
  h.k.run();
  ASSERT_EQ(h.fire_times.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_EQ(h.fire_times[i].size(), 1u) << i;
    EXPECT_EQ(h.p->stage(i).fires, 1u);
    if (i > 0) EXPECT_LT(h.fire_times[i - 1][0], h.fire_times[i][0]);
  }
  // fire at 0, toggle +20, forward +100 per hop.
  EXPECT_EQ(h.fire_times[1][0], 120u);
  EXPECT_EQ(h.fire_times[2][0], 240u);
  EXPECT_EQ(std::vector<std::uint64_t>(h.p->tokens_out().begin(), h.p->tokens_out().end()),
            std::vector<std::uint64_t>{7});
  EXPECT_TRUE(h.p->violations().empty());
  EXPECT_FALSE(h.p->fire_pending());
}

TEST(Pipeline, SecondTokenWaitsForDownstreamAck) {
  Harness h;
  h.to_send = {1, 2};
  h.offer();
  h.k.run();
  ASSERT_EQ(h.fire_times[0].size(), 2u);
  // The second token is offered at 20 but stage 0 can only fire once stage 1
  // has captured the first token and toggled its ack (120 + 20).
  EXPECT_EQ(h.fire_times[0][1], 140u);
  EXPECT_TRUE(h.p->violations().empty());
}

TEST(Pipeline, ResetMidFlightClearsEverything) {
  Harness h;
  h.to_send = {1, 2, 3};
  h.offer();
  h.k.run_until(130);
  h.p->set_reset(true);
  h.k.run();
  for (std::size_t i = 0; i < h.p->size(); ++i) {
    EXPECT_FALSE(h.p->stage(i).phase_in);
    EXPECT_FALSE(h.p->stage(i).phase_out);
    EXPECT_FALSE(h.k.value(h.p->stage(i).fire));
  }
  EXPECT_FALSE(h.p->fire_pending());
  EXPECT_TRUE(h.fire_times[2].empty());
}

TEST(Pipeline, BundledDataConstraintEnforced) {
  Kernel k;
  PipelineConfig cfg;
  cfg.datapath_delays = {50, 101, 0};
  EXPECT_THROW(build_pipeline(k, cfg), ConfigError);
  cfg.datapath_delays = {100, 100, 100};
  EXPECT_NO_THROW(build_pipeline(k, cfg));
  Kernel k2;
  cfg.stages[1].fire_to_phase_delay = 0;
  EXPECT_THROW(build_pipeline(k2, cfg), ConfigError);
}

TEST(Pipeline, MonitorFlagsEarlyRequest) {
  Kernel k;
  auto p = build_pipeline(k, {});
  k.schedule(p->in_req(), true, 0);
  k.schedule(p->in_req(), false, 5);  // before stage 0 toggled at 20
  k.run();
  EXPECT_FALSE(p->violations().empty());
}

// Tokens in = tokens out in FIFO order and every stage fires once per token,
// for random token counts, stage delays and sink delays.
TEST(PipelineProperty, TokenConservationAndLiveness) {
  std::mt19937_64 rng(123);
  for (int round = 0; round < 80; ++round) {
    PipelineConfig cfg;
    cfg.stages.resize(1 + rng() % 5);
    cfg.datapath_delays.assign(cfg.stages.size(), 0);
    for (auto& st : cfg.stages) {
      st.forward_delay = 1 + rng() % 200;
      st.fire_to_phase_delay = 1 + rng() % 40;
    }
    Harness h(cfg);
    const std::size_t n = 1 + rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      h.to_send.push_back(1000 + i);
      h.sink_delays.push_back(rng() % 300);
    }
    h.offer_gap = rng() % 50;
    h.offer();
    h.k.run();
    EXPECT_EQ(std::vector<std::uint64_t>(h.p->tokens_in().begin(), h.p->tokens_in().end()),
              h.to_send);
    EXPECT_EQ(std::vector<std::uint64_t>(h.p->tokens_out().begin(), h.p->tokens_out().end()),
              h.to_send);
    for (std::size_t i = 0; i < h.p->size(); ++i) EXPECT_EQ(h.p->stage(i).fires, n);
    EXPECT_TRUE(h.p->violations().empty());
    EXPECT_FALSE(h.p->fire_pending());
    for (std::size_t i = 0; i < h.p->size(); ++i) {
      EXPECT_EQ(h.k.value(h.p->stage(i).req_out), h.p->stage(i).phase_in);
      EXPECT_EQ(h.k.value(h.p->stage(i).ack_out), h.p->stage(i).phase_out);
    }
  }
}

// Downstream that acknowledges req4 after a fixed delay.
struct BridgeHarness {
  Kernel k;
  SignalId req2;
  std::unique_ptr<PhaseBridge> b;
  std::vector<std::pair<SimTime, bool>> req4_edges;

  explicit BridgeHarness(bool responder = true, SimTime timeout = 1'000'000) {
    req2 = k.add_signal("src", "req2");
    b = phase_bridge_2to4(k, req2, {10, timeout});
    k.on_edge(b->four_phase_req(), Edge::Any,
              [this](const Signal& s) { req4_edges.emplace_back(k.now(), s.value); });
    if (responder) {
      k.on_edge(b->four_phase_req(), Edge::Any, [this](const Signal& s) {
        k.schedule(b->four_phase_ack(), s.value, k.now() + 30);
      });
    }
  }
};

TEST(PhaseBridge, SingleTransitionOnePulse) {
  BridgeHarness h;
  h.k.schedule(h.req2, true, 0);
  h.k.run();
  EXPECT_EQ(h.b->pulses(), 1u);
  ASSERT_EQ(h.req4_edges.size(), 2u);
  EXPECT_EQ(h.req4_edges[0], (std::pair<SimTime, bool>{10, true}));
  EXPECT_EQ(h.req4_edges[1], (std::pair<SimTime, bool>{50, false}));
  EXPECT_TRUE(h.k.value(h.b->two_phase_ack()));
  EXPECT_EQ(h.k.signal(h.b->two_phase_ack()).last_transition, 90u);
  EXPECT_TRUE(h.b->toggle_state());
  EXPECT_TRUE(h.b->deadlocks().empty());
  EXPECT_TRUE(h.b->violations().empty());
}

TEST(PhaseBridge, BothEdgesProduceNonOverlappingPulses) {
  BridgeHarness h;
  h.k.schedule(h.req2, true, 0);
  h.k.schedule(h.req2, false, 200);
  h.k.run();
  EXPECT_EQ(h.b->pulses(), 2u);
  ASSERT_EQ(h.req4_edges.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(h.req4_edges[i].second, i % 2 == 0);
    if (i > 0) EXPECT_LT(h.req4_edges[i - 1].first, h.req4_edges[i].first);
  }
  EXPECT_FALSE(h.b->toggle_state());
}

TEST(PhaseBridge, EarlyTransitionIsQueuedAndFlagged) {
  BridgeHarness h;
  h.k.schedule(h.req2, true, 0);
  h.k.schedule(h.req2, false, 20);
  h.k.run();
  EXPECT_EQ(h.b->pulses(), 2u);
  EXPECT_EQ(h.req4_edges.size(), 4u);
  EXPECT_FALSE(h.b->violations().empty());
}

TEST(PhaseBridge, NoTransitionNoPulse) {
  BridgeHarness h;
  h.k.run();
  EXPECT_EQ(h.b->pulses(), 0u);
  EXPECT_TRUE(h.req4_edges.empty());
}

TEST(PhaseBridge, MissingCompletionReportsDeadlock) {
  BridgeHarness h(false, 1000);
  h.k.schedule(h.req2, true, 0);
  h.k.run();
  ASSERT_EQ(h.b->deadlocks().size(), 1u);
  EXPECT_NE(h.b->deadlocks()[0].find("deadlock"), std::string::npos);
  EXPECT_TRUE(h.k.value(h.b->four_phase_req()));
}

TEST(PhaseBridge, ZeroTimeoutRejected) {
  Kernel k;
  auto r = k.add_signal("s", "r");
  EXPECT_THROW(phase_bridge_2to4(k, r, {10, 0}), ConfigError);
}

}  // namespace
}  // namespace tdtm
