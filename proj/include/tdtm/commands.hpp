#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdtm/config.hpp"
#include "tdtm/simulator.hpp"

namespace tdtm {

// Dataset per the config: binary CSV, or raw CSV when thresholds are set.
std::vector<Sample> load_samples(const RunConfig& cfg, std::size_t num_features);

std::string summary_csv_header();
std::string summary_csv_row(const SimConfig& cfg, const RunResult& run);
std::string samples_csv(const RunResult& run);
std::string report_text(const RunConfig& cfg, const TmModel& model, const RunResult& run);

// Writes report.csv, samples.csv, report.txt and, with cfg.vcd, trace.vcd
// into cfg.out_dir. Returns the run for callers that want the numbers.
RunResult cmd_simulate(const RunConfig& cfg, std::ostream& log);

// One summary row per mode over the same samples and seed -> comparison.csv.
std::vector<RunResult> cmd_compare(const RunConfig& cfg, std::span<const Mode> modes,
                                   std::ostream& log);

// Modes that make sense for the model's variant, digital oracle first.
std::vector<Mode> default_compare_modes(const TmModel& model);

// One simulate per value -> sweep.csv. Parameters: e, tau, tdc_resolution,
// delta_meta, arbiter, K. Sweeping e keeps the fine unit tau/2^e fixed.
std::vector<RunResult> cmd_sweep(const RunConfig& cfg, std::string_view parameter,
                                 std::span<const std::string> values, std::ostream& log);

// Applies one sweep value to a copy of the config and model.
void apply_sweep_value(RunConfig& cfg, TmModel& model, std::string_view parameter,
                       std::string_view value);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace tdtm
