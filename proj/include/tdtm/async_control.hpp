#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdtm/event_kernel.hpp"

namespace tdtm {

// Click element fire condition: a new request has arrived and the previous
// output has been acknowledged.
constexpr bool click_fire(bool req_in, bool phase_in, bool ack_in, bool phase_out) {
  return (req_in != phase_in) && !(ack_in != phase_out);
}

// Two-input Muller C-element: follows the inputs when they agree, else holds.
constexpr bool c_element(bool a, bool b, bool c_prev) {
  if (a && b) return true;
  if (!a && !b) return false;
  return c_prev;
}

struct StageTiming {
  SimTime forward_delay = 100;      // matched request delay to the next stage
  SimTime fire_to_phase_delay = 20;
};

struct PipelineConfig {
  std::vector<StageTiming> stages = std::vector<StageTiming>(3);
  // Worst-case combinational delay launched by each stage's fire. Bundled
  // data requires it to fit inside that stage's forward delay.
  std::vector<SimTime> datapath_delays = std::vector<SimTime>(3, 0);
  std::string scope = "ctrl";
};

struct ClickStage {
  SignalId req_in, ack_in, req_out, ack_out, fire;
  bool phase_in = false;
  bool phase_out = false;
  SimTime fire_to_phase_delay = 0;
  SimTime stage_forward_delay = 0;
  std::uint64_t fires = 0;
};

// Two-phase bundled-data pipeline of click stages.
//
// Environment side: toggle in_req() to offer a token (after set_input_token),
// wait for in_ack() to match. Sink side: out_req() toggles once per token
// leaving the last stage; the sink acknowledges by toggling out_ack().
//
// A protocol monitor records a violation when a request toggles while the
// previous one is still unconsumed, or when an acknowledge arrives with no
// outstanding output.
class ClickPipeline {
 public:
  using FireHook = std::function<void(std::size_t stage, std::uint64_t token)>;

  ClickPipeline(Kernel& kernel, PipelineConfig config);
  ClickPipeline(const ClickPipeline&) = delete;
  ClickPipeline& operator=(const ClickPipeline&) = delete;

  std::size_t size() const { return stages_.size(); }
  const ClickStage& stage(std::size_t i) const { return stages_[i].view; }

  SignalId in_req() const { return in_req_; }
  SignalId in_ack() const { return stages_.front().view.ack_out; }
  SignalId out_req() const { return out_req_; }
  SignalId out_ack() const { return out_ack_; }

  // Token identifier presented on the input bus; stage 0 captures it on fire.
  void set_input_token(std::uint64_t token) { input_token_ = token; }
  void on_fire(FireHook hook) { hooks_.push_back(std::move(hook)); }

  // While asserted, phases are held at 0 and no stage fires.
  void set_reset(bool asserted);
  bool in_reset() const { return reset_; }

  std::span<const std::uint64_t> tokens_in() const { return tokens_in_; }
  std::span<const std::uint64_t> tokens_out() const { return tokens_out_; }
  std::span<const std::string> violations() const { return violations_; }
  bool fire_pending() const;

 private:
  struct StageState {
    ClickStage view;
    bool fire_target = false;
    bool toggle_pending = false;
    std::uint64_t token = 0;
  };

  void evaluate(std::size_t i);
  void on_fire_rise(std::size_t i);
  void toggle_phases(std::size_t i);
  void track(EventHandle h) { owned_.push_back(h); }
  void violation(std::size_t i, const std::string& what);

  Kernel& kernel_;
  PipelineConfig config_;
  std::vector<StageState> stages_;
  SignalId in_req_, out_req_, out_ack_;
  std::vector<FireHook> hooks_;
  std::vector<EventHandle> owned_;
  std::vector<std::uint64_t> tokens_in_, tokens_out_;
  std::vector<std::string> violations_;
  std::uint64_t input_token_ = 0;
  bool reset_ = false;
};

// Validates the bundled-data constraint, then wires the pipeline into kernel.
std::unique_ptr<ClickPipeline> build_pipeline(Kernel& kernel, const PipelineConfig& config);

// Kernel-level C-element gate driving `out` after `delay`.
class CElementGate {
 public:
  CElementGate(Kernel& kernel, SignalId a, SignalId b, SignalId out, SimTime delay);
  CElementGate(const CElementGate&) = delete;
  CElementGate& operator=(const CElementGate&) = delete;

 private:
  void evaluate();

  Kernel& kernel_;
  SignalId a_, b_, out_;
  SimTime delay_;
  bool target_;
};

struct BridgeConfig {
  SimTime toggle_delay = 10;
  SimTime timeout = 1'000'000;
};

// Two-phase to four-phase boundary. Every transition on the two-phase request
// produces one four-phase req pulse; req falls once the downstream raises the
// four-phase ack, and the two-phase ack toggles when ack returns to zero.
class PhaseBridge {
 public:
  PhaseBridge(Kernel& kernel, SignalId two_phase_req, BridgeConfig config,
              std::optional<SignalId> two_phase_ack, std::string scope);
  PhaseBridge(const PhaseBridge&) = delete;
  PhaseBridge& operator=(const PhaseBridge&) = delete;

  SignalId four_phase_req() const { return req4_; }
  SignalId four_phase_ack() const { return ack4_; }  // driven by the downstream
  SignalId two_phase_ack() const { return ack2_; }
  bool toggle_state() const { return toggle_; }
  std::uint64_t pulses() const { return pulses_; }
  std::span<const std::string> deadlocks() const { return deadlocks_; }
  std::span<const std::string> violations() const { return violations_; }

 private:
  void start_cycle();
  void arm_timeout(const char* waiting_for);

  Kernel& kernel_;
  BridgeConfig config_;
  SignalId req2_, req4_, ack4_, ack2_;
  bool toggle_ = false;
  bool busy_ = false;
  bool req4_high_ = false;
  std::size_t queued_ = 0;
  std::uint64_t pulses_ = 0;
  std::uint64_t cycle_ = 0;
  std::optional<EventHandle> timer_;
  std::vector<std::string> deadlocks_, violations_;
};

std::unique_ptr<PhaseBridge> phase_bridge_2to4(Kernel& kernel, SignalId two_phase_net,
                                               BridgeConfig config = {},
                                               std::optional<SignalId> two_phase_ack = {},
                                               std::string scope = "bridge");

}  // namespace tdtm
