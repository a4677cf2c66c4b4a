#include "tdtm/metrics.hpp"

#include "tdtm/error.hpp"

namespace tdtm {

double throughput(std::size_t F, std::size_t C, std::size_t K, double f_infer_hz) {
  return 2.0 * static_cast<double>(F) * static_cast<double>(C) * static_cast<double>(K) *
         f_infer_hz;
}

double infer_rate_for(std::size_t F, std::size_t C, std::size_t K, double ops_per_s) {
  return ops_per_s / throughput(F, C, K, 1.0);
}

double energy_efficiency(double throughput_gops, double power_w) {
  if (!(power_w > 0)) throw ConfigError("metrics.power_w: must be positive");
  return throughput_gops / (1000.0 * power_w);
}

double power_for(double throughput_gops, double tops_per_j) {
  if (!(tops_per_j > 0)) throw ConfigError("energy efficiency must be positive");
  return throughput_gops / (1000.0 * tops_per_j);
}

std::map<std::string, std::uint64_t> collect_transitions(const Kernel& kernel) {
  std::map<std::string, std::uint64_t> counts;
  for (const Signal& s : kernel.signals()) counts[s.scope] += s.transition_count;
  return counts;
}

std::uint64_t total_transitions(const std::map<std::string, std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (const auto& [scope, n] : counts) total += n;
  return total;
}

double infer_frequency(std::size_t inferences, SimTime first_inject, SimTime last_grant) {
  if (inferences == 0) throw ConfigError("infer_frequency: no completed inferences");
  if (last_grant <= first_inject) throw ConfigError("infer_frequency: zero-duration run");
  return static_cast<double>(inferences) / static_cast<double>(last_grant - first_inject) * 1e12;
}

}  // namespace tdtm
