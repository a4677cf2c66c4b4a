#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tdtm/simulator.hpp"

namespace tdtm {

// Each sample runs on its own kernel (simulate_sample); results are in sample
// order. The parallel runner spreads samples over OpenMP threads and must
// produce exactly what the serial runner does.
std::vector<SampleResult> run_batch_serial(const TmModel& model, std::span<const Sample> samples,
                                           const SimConfig& config);
std::vector<SampleResult> run_batch_parallel(const TmModel& model,
                                             std::span<const Sample> samples,
                                             const SimConfig& config, int threads = 0);

double agreement_rate(std::span<const SampleResult> results);

}  // namespace tdtm
