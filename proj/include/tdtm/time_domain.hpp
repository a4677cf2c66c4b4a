#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tdtm/event_kernel.hpp"
#include "tdtm/reference.hpp"
#include "tdtm/tm_model.hpp"

namespace tdtm {

enum class TdMode { Ideal, Architectural };

// How the TDC output is mapped to the DCDE control code.
//   PerRail:        each rail is timed against the launch event and decoded
//                   back through the LOD, dc' = M^ - S^.
//   IntervalLinear: dc' = dc, the quantized M-minus-S interval.
//   IntervalLog:    dc' = sign(dc) * lod_reconstruct of the pair read from |dc|.
enum class DcDecode { PerRail, IntervalLinear, IntervalLog };

std::string_view to_string(TdMode m);
std::string_view to_string(DcDecode d);
TdMode parse_td_mode(std::string_view s);
DcDecode parse_dc_decode(std::string_view s);

struct TimeDomainConfig {
  SimTime tau = 160;             // coarse unit
  unsigned e = 4;                // fine resolution bits; fine unit is tau / 2^e
  SimTime tdc_resolution = 10;
  SimTime tdc_latency = 40;
  SimTime dcde_step = 10;
  SimTime dcde_base = 0;         // 0 = derive from the model
  SimTime tau_hamming = 50;
  unsigned lod_width = 16;
  SimTime launch_skew = 0;       // M rail launches this much after S
  SimTime race_control_delay = 10;
  TdMode mode = TdMode::Architectural;
  DcDecode decode = DcDecode::PerRail;

  SimTime fine_unit() const { return tau >> e; }
  // Throws ConfigError for non-positive delays or tau not divisible by 2^e.
  void validate() const;
};

struct CoarseFine {
  unsigned k = 0;
  std::uint32_t f = 0;
  bool zero = false;  // leading-one detector saw no set bit
  bool operator==(const CoarseFine&) const = default;
};

struct SignedSplit {
  std::uint64_t S = 0;
  std::uint64_t M = 0;
  bool operator==(const SignedSplit&) const = default;
};

struct DelayCode {
  std::int64_t dc = 0;
  bool operator==(const DelayCode&) const = default;
};

// Leading-one position and the bits below it normalised to e bits.
// Throws DimensionError when value does not fit in bit_width bits.
CoarseFine lod_extract(std::uint64_t value, unsigned e, unsigned bit_width);
SimTime coarse_fine_delay(const CoarseFine& cf, const TimeDomainConfig& cfg);
std::uint64_t lod_reconstruct(const CoarseFine& cf, unsigned e);

SignedSplit split_signed(std::span<const std::int32_t> weights,
                         std::span<const std::uint8_t> clauses);

// dc = sign(slow - fast) * floor(|slow - fast| / resolution).
DelayCode vernier_tdc(SimTime t_fast_arrival, SimTime t_slow_arrival, SimTime resolution);

// Throws ConfigError when the result would not be strictly positive.
SimTime dcde_delay(DelayCode dc, SimTime base, SimTime step);

// Multiclass: score_i = firing positive + silent negative clauses,
// delay_i = (C - score_i) * tau_hamming.
std::vector<SimTime> hamming_race_delays(const TmModel& model,
                                         std::span<const ClauseVector> per_class,
                                         const TimeDomainConfig& cfg);

struct ClassRace {
  std::int64_t sum = 0;
  SignedSplit split;
  CoarseFine cf_S, cf_M;
  SimTime t_S = 0, t_M = 0;  // rail arrivals relative to raceDR
  DelayCode dc;              // raw Vernier code
  std::int64_t dc_used = 0;  // decoded control code fed to the DCDE
  SimTime delay = 0;         // final single-rail delay
};

struct CotmRace {
  std::vector<SimTime> delays;
  std::vector<ClassRace> classes;
  std::size_t oracle = 0;     // argmax of the exact sums
  std::size_t predicted = 0;  // argmin of delays, lowest index on ties
  bool agrees() const { return oracle == predicted; }
};

CotmRace cotm_race_delays(const TmModel& model, std::span<const std::uint8_t> clauses,
                          const TimeDomainConfig& cfg);

// Largest per-rail magnitude max(sum of positive, sum of |negative|) over classes.
std::uint64_t rail_bound(const TmModel& model);

// Largest |dc'| the configured path can produce for this model.
std::uint64_t max_control_code(const TmModel& model, const TimeDomainConfig& cfg);

// (max|dc'| + 1) * dcde_step.
SimTime auto_dcde_base(const TmModel& model, const TimeDomainConfig& cfg);

// cfg.dcde_base, or the derived one when it is 0. Throws ConfigError when an
// explicit base is too small to keep every delay positive.
SimTime effective_dcde_base(const TmModel& model, const TimeDomainConfig& cfg);

// Time from raceDR until the slowest possible rail and the TDC have settled.
SimTime race_window(const TmModel& model, const TimeDomainConfig& cfg);

// Index of the smallest delay; ties go to the lowest index.
std::size_t argmin_delay(std::span<const SimTime> delays);

}  // namespace tdtm
