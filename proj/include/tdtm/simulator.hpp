#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdtm/arbitration.hpp"
#include "tdtm/async_control.hpp"
#include "tdtm/event_kernel.hpp"
#include "tdtm/metrics.hpp"
#include "tdtm/reference.hpp"
#include "tdtm/time_domain.hpp"
#include "tdtm/tm_model.hpp"

namespace tdtm {

enum class Mode { DigitalOracle, HammingTd, CotmIdeal, CotmArchitectural };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);
bool is_time_domain(Mode m);

enum class TokenSource { Pipelined, Serialized };

std::string_view to_string(TokenSource s);
TokenSource parse_token_source(std::string_view s);

struct SimConfig {
  Mode mode = Mode::HammingTd;
  Topology arbiter = Topology::Tba;
  std::uint64_t seed = 1;
  TokenSource source = TokenSource::Pipelined;
  SimTime token_interval = 0;  // minimum spacing between injections

  SimTime forward_delay = 100;
  SimTime fire_to_phase_delay = 20;
  SimTime clause_eval_delay = 60;
  SimTime weight_select_delay = 80;
  SimTime classify_delay = 90;  // digital classifier in stage 2
  SimTime sink_ack_delay = 10;

  BridgeConfig bridge;
  TimeDomainConfig td;
  MutexModel wta;
  std::optional<double> power_w;

  // Throws ConfigError when the mode does not fit the model variant or any
  // timing parameter is unusable.
  void validate(const TmModel& model) const;
};

struct SampleResult {
  std::size_t index = 0;
  std::optional<std::size_t> label;
  std::size_t oracle = 0;
  std::optional<std::size_t> predicted;
  ClassSums sums;
  std::vector<SimTime> delays;  // race delays; empty in digital-oracle mode
  std::vector<ClassRace> races; // CoTM modes only
  SimTime inject_time = 0;
  SimTime grant_time = 0;
  std::uint32_t meta_events = 0;

  bool agrees() const { return predicted && *predicted == oracle; }
  SimTime latency() const { return grant_time - inject_time; }
};

struct RunResult {
  std::vector<SampleResult> samples;
  MetricsReport metrics;
  SimTime first_inject = 0;
  SimTime last_grant = 0;
  std::uint64_t events_delivered = 0;
};

// Scopes that always appear in transition reports, present or not.
std::span<const std::string_view> report_scopes();

// All samples stream through one kernel instance and one click pipeline.
// A VCD of every net is written to `vcd` when given. Protocol, deadlock and
// one-hot failures raise InvariantViolation.
RunResult simulate_stream(const TmModel& model, std::span<const Sample> samples,
                          const SimConfig& config, std::ostream* vcd = nullptr);

// One sample on a fresh kernel, seeded from (config.seed, index).
SampleResult simulate_sample(const TmModel& model, const Sample& sample, std::size_t index,
                             const SimConfig& config);

std::uint64_t sample_seed(std::uint64_t seed, std::size_t index);

}  // namespace tdtm
