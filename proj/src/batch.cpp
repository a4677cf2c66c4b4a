#include "tdtm/batch.hpp"

#include <exception>

#include <omp.h>

namespace tdtm {

std::vector<SampleResult> run_batch_serial(const TmModel& model, std::span<const Sample> samples,
                                           const SimConfig& config) {
  std::vector<SampleResult> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.push_back(simulate_sample(model, samples[i], i, config));
  }
  return out;
}

std::vector<SampleResult> run_batch_parallel(const TmModel& model,
                                             std::span<const Sample> samples,
                                             const SimConfig& config, int threads) {
  config.validate(model);
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
  std::vector<SampleResult> out(samples.size());
  std::vector<std::exception_ptr> errors(samples.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 4) num_threads(team)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = simulate_sample(model, samples[idx], idx, config);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double agreement_rate(std::span<const SampleResult> results) {
  if (results.empty()) return 0;
  std::size_t agree = 0;
  for (const auto& r : results) agree += r.agrees();
  return static_cast<double>(agree) / static_cast<double>(results.size());
}

}  // namespace tdtm
