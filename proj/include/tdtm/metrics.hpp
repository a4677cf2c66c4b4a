#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "tdtm/event_kernel.hpp"

namespace tdtm {

// Operations per second: 2 * F * C * K * f_infer.
double throughput(std::size_t F, std::size_t C, std::size_t K, double f_infer_hz);

// Inverse of throughput() for a target rate in Op/s.
double infer_rate_for(std::size_t F, std::size_t C, std::size_t K, double ops_per_s);

// TOp/J from GOp/s and watts. Throws ConfigError for P <= 0.
double energy_efficiency(double throughput_gops, double power_w);

// Watts needed to reach a target TOp/J at a given GOp/s.
double power_for(double throughput_gops, double tops_per_j);

// Transitions summed per signal scope. Non-physical energy proxy.
std::map<std::string, std::uint64_t> collect_transitions(const Kernel& kernel);

std::uint64_t total_transitions(const std::map<std::string, std::uint64_t>& counts);

// Completed inferences per second of simulated time. Throws ConfigError when
// there are no inferences or the span is empty.
double infer_frequency(std::size_t inferences, SimTime first_inject, SimTime last_grant);

struct MetricsReport {
  std::size_t F = 0, C = 0, K = 0;
  std::size_t inferences = 0;
  double f_infer = 0;      // Hz
  double throughput = 0;   // Op/s
  std::optional<double> power_w;
  std::optional<double> energy_efficiency;  // TOp/J, only with a supplied power
  std::map<std::string, std::uint64_t> transitions;
  std::uint64_t transition_proxy = 0;
  double agreement_rate = 0;
  std::uint64_t meta_events = 0;
};

}  // namespace tdtm
