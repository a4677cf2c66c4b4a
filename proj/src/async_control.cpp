#include "tdtm/async_control.hpp"

#include "tdtm/error.hpp"

namespace tdtm {

ClickPipeline::ClickPipeline(Kernel& kernel, PipelineConfig config)
    : kernel_(kernel), config_(std::move(config)) {
  const std::size_t n = config_.stages.size();
  const std::string& sc = config_.scope;
  auto net = [&](std::size_t i, const char* what) {
    return kernel_.add_signal(sc, "s" + std::to_string(i) + "_" + what);
  };

  in_req_ = kernel_.add_signal(sc, "in_req");
  stages_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& v = stages_[i].view;
    v.req_in = i == 0 ? in_req_ : net(i, "req_in");
    v.req_out = net(i, "req_out");
    v.ack_out = net(i, "ack_out");
    v.fire = net(i, "fire");
    v.fire_to_phase_delay = config_.stages[i].fire_to_phase_delay;
    v.stage_forward_delay = config_.stages[i].forward_delay;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) stages_[i].view.ack_in = net(i, "ack_in");
  out_req_ = kernel_.add_signal(sc, "out_req");
  out_ack_ = kernel_.add_signal(sc, "out_ack");
  stages_.back().view.ack_in = out_ack_;

  for (std::size_t i = 0; i < n; ++i) {
    const ClickStage& v = stages_[i].view;

    // Matched-delay request line into the next stage (or the sink).
    const SignalId downstream = i + 1 < n ? stages_[i + 1].view.req_in : out_req_;
    const SimTime fwd = v.stage_forward_delay;
    kernel_.on_edge(v.req_out, Edge::Any, [this, downstream, fwd](const Signal& s) {
      track(kernel_.schedule(downstream, s.value, kernel_.now() + fwd));
    });
    if (i > 0) {
      const SignalId upstream_ack = stages_[i - 1].view.ack_in;
      kernel_.on_edge(v.ack_out, Edge::Any, [this, upstream_ack](const Signal& s) {
        track(kernel_.schedule(upstream_ack, s.value, kernel_.now()));
      });
    }

    kernel_.on_edge(v.req_in, Edge::Any, [this, i](const Signal& s) {
      if (!reset_ && !s.value != stages_[i].view.phase_in) {
        violation(i, "request toggled while previous request still pending");
      }
      evaluate(i);
    });
    kernel_.on_edge(v.ack_in, Edge::Any, [this, i](const Signal& s) {
      if (!reset_ && !s.value == stages_[i].view.phase_out) {
        violation(i, "acknowledge without an outstanding output");
      }
      evaluate(i);
    });
    kernel_.on_edge(v.fire, Edge::Rising, [this, i](const Signal&) { on_fire_rise(i); });
  }
}

void ClickPipeline::violation(std::size_t i, const std::string& what) {
  violations_.push_back("t=" + std::to_string(kernel_.now()) + " stage " + std::to_string(i) +
                        ": " + what);
}

void ClickPipeline::evaluate(std::size_t i) {
  auto& s = stages_[i];
  const bool cond = !reset_ && click_fire(kernel_.value(s.view.req_in), s.view.phase_in,
                                          kernel_.value(s.view.ack_in), s.view.phase_out);
  if (cond != s.fire_target) {
    s.fire_target = cond;
    track(kernel_.schedule(s.view.fire, cond, kernel_.now()));
  }
}

void ClickPipeline::on_fire_rise(std::size_t i) {
  if (reset_) return;
  auto& s = stages_[i];
  ++s.view.fires;
  s.token = i == 0 ? input_token_ : stages_[i - 1].token;
  if (i == 0) tokens_in_.push_back(s.token);
  if (i + 1 == stages_.size()) tokens_out_.push_back(s.token);
  for (auto& hook : hooks_) hook(i, s.token);
  s.toggle_pending = true;
  track(kernel_.call_at(kernel_.now() + s.view.fire_to_phase_delay,
                        [this, i] { toggle_phases(i); }));
}

void ClickPipeline::toggle_phases(std::size_t i) {
  auto& s = stages_[i];
  s.view.phase_in = !s.view.phase_in;
  s.view.phase_out = !s.view.phase_out;
  s.toggle_pending = false;
  track(kernel_.schedule(s.view.req_out, s.view.phase_in, kernel_.now()));
  track(kernel_.schedule(s.view.ack_out, s.view.phase_out, kernel_.now()));
  evaluate(i);
}

void ClickPipeline::set_reset(bool asserted) {
  reset_ = asserted;
  if (!asserted) {
    for (std::size_t i = 0; i < stages_.size(); ++i) evaluate(i);
    return;
  }
  for (auto h : owned_) kernel_.cancel(h);
  owned_.clear();
  const SimTime now = kernel_.now();
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    auto& s = stages_[i];
    s.view.phase_in = false;
    s.view.phase_out = false;
    s.toggle_pending = false;
    s.fire_target = false;
    s.token = 0;
    track(kernel_.schedule(s.view.fire, false, now));
    track(kernel_.schedule(s.view.req_out, false, now));
    track(kernel_.schedule(s.view.ack_out, false, now));
    if (i > 0) track(kernel_.schedule(s.view.req_in, false, now));
    if (i + 1 < stages_.size()) track(kernel_.schedule(s.view.ack_in, false, now));
  }
  track(kernel_.schedule(out_req_, false, now));
}

bool ClickPipeline::fire_pending() const {
  for (const auto& s : stages_) {
    if (s.fire_target || s.toggle_pending || kernel_.value(s.view.fire)) return true;
  }
  return false;
}

std::unique_ptr<ClickPipeline> build_pipeline(Kernel& kernel, const PipelineConfig& config) {
  if (config.stages.empty()) throw ConfigError("pipeline: needs at least one stage");
  if (config.datapath_delays.size() != config.stages.size()) {
    throw ConfigError("pipeline: one datapath delay per stage required");
  }
  for (std::size_t i = 0; i < config.stages.size(); ++i) {
    const auto& st = config.stages[i];
    if (st.forward_delay == 0 || st.fire_to_phase_delay == 0) {
      throw ConfigError("pipeline stage " + std::to_string(i) + ": delays must be positive");
    }
    if (config.datapath_delays[i] > st.forward_delay) {
      throw ConfigError("pipeline stage " + std::to_string(i) + ": datapath delay " +
                        std::to_string(config.datapath_delays[i]) + " ps exceeds forward delay " +
                        std::to_string(st.forward_delay) + " ps (bundled-data constraint)");
    }
  }
  return std::make_unique<ClickPipeline>(kernel, config);
}

CElementGate::CElementGate(Kernel& kernel, SignalId a, SignalId b, SignalId out, SimTime delay)
    : kernel_(kernel), a_(a), b_(b), out_(out), delay_(delay), target_(kernel.value(out)) {
  kernel_.on_edge(a_, Edge::Any, [this](const Signal&) { evaluate(); });
  kernel_.on_edge(b_, Edge::Any, [this](const Signal&) { evaluate(); });
}

void CElementGate::evaluate() {
  const bool next = c_element(kernel_.value(a_), kernel_.value(b_), target_);
  if (next != target_) {
    target_ = next;
    kernel_.schedule(out_, next, kernel_.now() + delay_);
  }
}

PhaseBridge::PhaseBridge(Kernel& kernel, SignalId two_phase_req, BridgeConfig config,
                         std::optional<SignalId> two_phase_ack, std::string scope)
    : kernel_(kernel), config_(config), req2_(two_phase_req) {
  req4_ = kernel_.add_signal(scope, "req4");
  ack4_ = kernel_.add_signal(scope, "ack4");
  ack2_ = two_phase_ack ? *two_phase_ack : kernel_.add_signal(scope, "ack2");

  kernel_.on_edge(req2_, Edge::Any, [this](const Signal&) {
    toggle_ = !toggle_;
    if (busy_) {
      violations_.push_back("t=" + std::to_string(kernel_.now()) +
                            ": two-phase request before previous cycle completed");
      ++queued_;
      return;
    }
    start_cycle();
  });

  kernel_.on_edge(ack4_, Edge::Rising, [this](const Signal&) {
    if (!busy_ || !req4_high_) {
      violations_.push_back("t=" + std::to_string(kernel_.now()) + ": unexpected ack4 rise");
      return;
    }
    if (timer_) kernel_.cancel(*timer_);
    req4_high_ = false;
    kernel_.schedule(req4_, false, kernel_.now() + config_.toggle_delay);
    arm_timeout("ack4 fall");
  });

  kernel_.on_edge(ack4_, Edge::Falling, [this](const Signal&) {
    if (!busy_ || req4_high_) {
      violations_.push_back("t=" + std::to_string(kernel_.now()) + ": unexpected ack4 fall");
      return;
    }
    if (timer_) kernel_.cancel(*timer_);
    timer_.reset();
    busy_ = false;
    kernel_.schedule(ack2_, !kernel_.value(ack2_), kernel_.now() + config_.toggle_delay);
    if (queued_ > 0) {
      --queued_;
      start_cycle();
    }
  });
}

void PhaseBridge::start_cycle() {
  busy_ = true;
  ++cycle_;
  if (req4_high_) {
    violations_.push_back("t=" + std::to_string(kernel_.now()) +
                          ": req4 would rise twice without an intervening fall");
  }
  req4_high_ = true;
  ++pulses_;
  kernel_.schedule(req4_, true, kernel_.now() + config_.toggle_delay);
  arm_timeout("ack4 rise");
}

void PhaseBridge::arm_timeout(const char* waiting_for) {
  const std::uint64_t cycle = cycle_;
  const SimTime deadline = kernel_.now() + config_.timeout;
  timer_ = kernel_.call_at(deadline, [this, cycle, waiting_for, deadline] {
    deadlocks_.push_back("cycle " + std::to_string(cycle) + ": " + waiting_for +
                         " not seen by t=" + std::to_string(deadline) + " ps (deadlock)");
  });
}

std::unique_ptr<PhaseBridge> phase_bridge_2to4(Kernel& kernel, SignalId two_phase_net,
                                               BridgeConfig config,
                                               std::optional<SignalId> two_phase_ack,
                                               std::string scope) {
  if (config.timeout == 0) throw ConfigError("bridge.timeout: must be positive");
  return std::make_unique<PhaseBridge>(kernel, two_phase_net, config, two_phase_ack,
                                       std::move(scope));
}

}  // namespace tdtm
