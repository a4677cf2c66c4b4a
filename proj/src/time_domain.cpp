#include "tdtm/time_domain.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "tdtm/error.hpp"

namespace tdtm {

std::string_view to_string(TdMode m) { return m == TdMode::Ideal ? "ideal" : "architectural"; }

std::string_view to_string(DcDecode d) {
  switch (d) {
    case DcDecode::PerRail: return "per-rail";
    case DcDecode::IntervalLinear: return "interval-linear";
    case DcDecode::IntervalLog: return "interval-log";
  }
  return "?";
}

TdMode parse_td_mode(std::string_view s) {
  if (s == "ideal") return TdMode::Ideal;
  if (s == "architectural") return TdMode::Architectural;
  throw ConfigError("td.mode: expected ideal or architectural, got '" + std::string(s) + "'");
}

DcDecode parse_dc_decode(std::string_view s) {
  if (s == "per-rail") return DcDecode::PerRail;
  if (s == "interval-linear") return DcDecode::IntervalLinear;
  if (s == "interval-log") return DcDecode::IntervalLog;
  throw ConfigError("td.decode: expected per-rail, interval-linear or interval-log, got '" +
                    std::string(s) + "'");
}

void TimeDomainConfig::validate() const {
  if (tau == 0) throw ConfigError("td.tau: must be positive");
  if (e > 20) throw ConfigError("td.e: at most 20 fine bits supported");
  if (lod_width == 0 || lod_width > 63) throw ConfigError("td.lod_width: must be in [1, 63]");
  if (tdc_resolution == 0) throw ConfigError("td.tdc_resolution: must be positive");
  if (dcde_step == 0) throw ConfigError("td.dcde_step: must be positive");
  if (tau_hamming == 0) throw ConfigError("td.tau_hamming: must be positive");
  if (tau % (SimTime{1} << e) != 0) {
    throw ConfigError("td.tau: " + std::to_string(tau) + " ps is not divisible by 2^" +
                      std::to_string(e) + ", fine unit would not be an integer");
  }
}

CoarseFine lod_extract(std::uint64_t value, unsigned e, unsigned bit_width) {
  if (bit_width < 64 && value >> bit_width) {
    throw DimensionError("lod_extract: value " + std::to_string(value) + " exceeds " +
                         std::to_string(bit_width) + " bits");
  }
  if (value == 0) return {0, 0, true};
  const unsigned k = static_cast<unsigned>(std::bit_width(value)) - 1;
  const std::uint64_t residual = value & ((std::uint64_t{1} << k) - 1);
  const std::uint64_t f = k >= e ? residual >> (k - e) : residual << (e - k);
  return {k, static_cast<std::uint32_t>(f), false};
}

SimTime coarse_fine_delay(const CoarseFine& cf, const TimeDomainConfig& cfg) {
  return SimTime{cf.k} * cfg.tau + SimTime{cf.f} * cfg.fine_unit();
}

std::uint64_t lod_reconstruct(const CoarseFine& cf, unsigned e) {
  if (cf.zero) return 0;
  const std::uint64_t x = (std::uint64_t{1} << e) + cf.f;
  return cf.k >= e ? x << (cf.k - e) : x >> (e - cf.k);
}

SignedSplit split_signed(std::span<const std::int32_t> weights,
                         std::span<const std::uint8_t> clauses) {
  if (weights.size() != clauses.size()) {
    throw DimensionError("split_signed: " + std::to_string(weights.size()) + " weights vs " +
                         std::to_string(clauses.size()) + " clauses");
  }
  SignedSplit s;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!clauses[j]) continue;
    if (weights[j] > 0) s.M += static_cast<std::uint64_t>(weights[j]);
    if (weights[j] < 0) s.S += static_cast<std::uint64_t>(-static_cast<std::int64_t>(weights[j]));
  }
  return s;
}

DelayCode vernier_tdc(SimTime t_fast_arrival, SimTime t_slow_arrival, SimTime resolution) {
  if (resolution == 0) throw ConfigError("vernier_tdc: resolution must be positive");
  if (t_slow_arrival >= t_fast_arrival) {
    return {static_cast<std::int64_t>((t_slow_arrival - t_fast_arrival) / resolution)};
  }
  return {-static_cast<std::int64_t>((t_fast_arrival - t_slow_arrival) / resolution)};
}

SimTime dcde_delay(DelayCode dc, SimTime base, SimTime step) {
  const std::int64_t d = static_cast<std::int64_t>(base) - dc.dc * static_cast<std::int64_t>(step);
  if (d <= 0) {
    throw ConfigError("dcde: base " + std::to_string(base) + " ps with step " +
                      std::to_string(step) + " ps gives a non-positive delay for dc=" +
                      std::to_string(dc.dc));
  }
  return static_cast<SimTime>(d);
}

std::vector<SimTime> hamming_race_delays(const TmModel& model,
                                         std::span<const ClauseVector> per_class,
                                         const TimeDomainConfig& cfg) {
  if (model.variant != Variant::Multiclass) {
    throw ConfigError("hamming_race_delays: requires a multiclass model");
  }
  if (per_class.size() != model.num_classes) {
    throw DimensionError("hamming_race_delays: expected one clause vector per class");
  }
  std::vector<SimTime> delays(model.num_classes);
  for (std::size_t i = 0; i < model.num_classes; ++i) {
    if (per_class[i].size() != model.num_clauses) {
      throw DimensionError("hamming_race_delays: clause vector length mismatch");
    }
    std::size_t score = 0;
    for (std::size_t j = 0; j < model.num_clauses; ++j) {
      const bool fired = per_class[i][j] != 0;
      score += model.polarities[j] > 0 ? fired : !fired;
    }
    delays[i] = (model.num_clauses - score) * cfg.tau_hamming;
  }
  return delays;
}

namespace {

// Reads a TDC-quantised duration back into a (k, f) pair.
CoarseFine read_pair(SimTime duration, const TimeDomainConfig& cfg) {
  CoarseFine cf;
  cf.k = static_cast<unsigned>(duration / cfg.tau);
  cf.f = static_cast<std::uint32_t>((duration % cfg.tau) / cfg.fine_unit());
  return cf;
}

SimTime quantize(SimTime t, SimTime resolution) { return t / resolution * resolution; }

std::uint64_t decode_rail(SimTime arrival, bool zero, const TimeDomainConfig& cfg) {
  CoarseFine cf = read_pair(quantize(arrival, cfg.tdc_resolution), cfg);
  cf.zero = zero;
  return lod_reconstruct(cf, cfg.e);
}

std::int64_t decode_interval_log(DelayCode dc, const TimeDomainConfig& cfg) {
  const std::uint64_t mag = static_cast<std::uint64_t>(dc.dc < 0 ? -dc.dc : dc.dc);
  if (mag == 0) return 0;
  const std::int64_t v =
      static_cast<std::int64_t>(lod_reconstruct(read_pair(mag * cfg.tdc_resolution, cfg), cfg.e));
  return dc.dc < 0 ? -v : v;
}

}  // namespace

std::uint64_t rail_bound(const TmModel& model) {
  std::uint64_t bound = 0;
  for (const auto& row : model.weights) {
    std::uint64_t pos = 0, neg = 0;
    for (auto w : row) {
      if (w > 0) pos += static_cast<std::uint64_t>(w);
      if (w < 0) neg += static_cast<std::uint64_t>(-static_cast<std::int64_t>(w));
    }
    bound = std::max({bound, pos, neg});
  }
  return bound;
}

SimTime race_window(const TmModel& model, const TimeDomainConfig& cfg) {
  const auto cf = lod_extract(rail_bound(model), cfg.e, cfg.lod_width);
  return coarse_fine_delay(cf, cfg) + cfg.launch_skew + cfg.tdc_latency;
}

std::uint64_t max_control_code(const TmModel& model, const TimeDomainConfig& cfg) {
  const std::uint64_t bound = rail_bound(model);
  if (cfg.mode == TdMode::Ideal) return bound;
  const SimTime span = coarse_fine_delay(lod_extract(bound, cfg.e, cfg.lod_width), cfg) +
                       cfg.launch_skew;
  if (cfg.decode == DcDecode::PerRail) return std::max(bound, decode_rail(span, bound == 0, cfg));
  const DelayCode widest{static_cast<std::int64_t>(span / cfg.tdc_resolution)};
  if (cfg.decode == DcDecode::IntervalLinear) return static_cast<std::uint64_t>(widest.dc);
  return static_cast<std::uint64_t>(decode_interval_log(widest, cfg));
}

SimTime auto_dcde_base(const TmModel& model, const TimeDomainConfig& cfg) {
  return (max_control_code(model, cfg) + 1) * cfg.dcde_step;
}

SimTime effective_dcde_base(const TmModel& model, const TimeDomainConfig& cfg) {
  if (cfg.dcde_base == 0) return auto_dcde_base(model, cfg);
  const std::uint64_t code = max_control_code(model, cfg);
  if (cfg.dcde_base <= code * cfg.dcde_step) {
    throw ConfigError("td.dcde_base: " + std::to_string(cfg.dcde_base) +
                      " ps must exceed max|dc| * step = " + std::to_string(code * cfg.dcde_step) +
                      " ps");
  }
  return cfg.dcde_base;
}

CotmRace cotm_race_delays(const TmModel& model, std::span<const std::uint8_t> clauses,
                          const TimeDomainConfig& cfg) {
  if (model.variant != Variant::Coalesced) {
    throw ConfigError("cotm_race_delays: requires a coalesced model");
  }
  const ClassSums sums = cotm_sums(model, clauses);
  const SimTime base = effective_dcde_base(model, cfg);

  CotmRace out;
  out.classes.resize(model.num_classes);
  out.delays.resize(model.num_classes);
  for (std::size_t i = 0; i < model.num_classes; ++i) {
    ClassRace& r = out.classes[i];
    r.sum = sums[i];
    r.split = split_signed(model.weights[i], clauses);
    r.cf_S = lod_extract(r.split.S, cfg.e, cfg.lod_width);
    r.cf_M = lod_extract(r.split.M, cfg.e, cfg.lod_width);
    r.t_S = coarse_fine_delay(r.cf_S, cfg);
    r.t_M = coarse_fine_delay(r.cf_M, cfg) + cfg.launch_skew;
    r.dc = vernier_tdc(r.t_S, r.t_M, cfg.tdc_resolution);
    if (cfg.mode == TdMode::Ideal) {
      r.dc_used = r.sum;
    } else {
      switch (cfg.decode) {
        case DcDecode::PerRail:
          r.dc_used = static_cast<std::int64_t>(decode_rail(r.t_M, r.cf_M.zero, cfg)) -
                      static_cast<std::int64_t>(decode_rail(r.t_S, r.cf_S.zero, cfg));
          break;
        case DcDecode::IntervalLinear: r.dc_used = r.dc.dc; break;
        case DcDecode::IntervalLog: r.dc_used = decode_interval_log(r.dc, cfg); break;
      }
    }
    r.delay = dcde_delay({r.dc_used}, base, cfg.dcde_step);
    out.delays[i] = r.delay;
  }
  out.oracle = argmax_class(sums);
  out.predicted = argmin_delay(out.delays);
  return out;
}

std::size_t argmin_delay(std::span<const SimTime> delays) {
  return static_cast<std::size_t>(std::min_element(delays.begin(), delays.end()) - delays.begin());
}

}  // namespace tdtm
