#include "tdtm/config.hpp"

#include <charconv>
#include <type_traits>
#include <sstream>

#include "tdtm/error.hpp"

namespace tdtm {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) {
    throw ParseError(std::string(key) + ": expected a non-negative integer, got '" +
                     std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ParseError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

std::string show(bool b) { return b ? "true" : "false"; }

template <typename Get>
ConfigKey time_key(std::string name, std::string help, Get ref) {
  return {name, std::move(help),
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
          [ref, name](RunConfig& c, std::string_view v) {
            ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(parse_u64(name, v));
          }};
}

template <typename Get, typename Parse, typename Show>
ConfigKey enum_key(std::string name, std::string help, Get ref, Parse parse, Show shw) {
  return {name, std::move(help),
          [ref, shw](const RunConfig& c) {
            return std::string(shw(ref(const_cast<RunConfig&>(c))));
          },
          [ref, parse](RunConfig& c, std::string_view v) { ref(c) = parse(v); }};
}

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> k;
  auto str = [&](std::string name, std::string help, std::string RunConfig::*field) {
    k.push_back({name, std::move(help), [field](const RunConfig& c) { return c.*field; },
                 [field](RunConfig& c, std::string_view v) { c.*field = std::string(v); }});
  };

  str("run.model", "model JSON file", &RunConfig::model_path);
  str("run.data", "dataset CSV file", &RunConfig::data_path);
  str("run.out", "output directory", &RunConfig::out_dir);
  k.push_back({"run.vcd", "write trace.vcd", [](const RunConfig& c) { return show(c.vcd); },
               [](RunConfig& c, std::string_view v) { c.vcd = parse_bool("run.vcd", v); }});
  k.push_back(enum_key(
      "run.mode", "digital-oracle | hamming-td | cotm-ideal | cotm-architectural",
      [](RunConfig& c) -> Mode& { return c.sim.mode; }, parse_mode,
      [](Mode m) { return to_string(m); }));
  k.push_back(enum_key(
      "run.arbiter", "tba | mesh", [](RunConfig& c) -> Topology& { return c.sim.arbiter; },
      parse_topology, [](Topology t) { return to_string(t); }));
  k.push_back(time_key("run.seed", "seed for metastable resolution",
                       [](RunConfig& c) -> std::uint64_t& { return c.sim.seed; }));
  k.push_back(enum_key(
      "run.source", "pipelined (next token on input ack) | serialized (after the sink acknowledge)",
      [](RunConfig& c) -> TokenSource& { return c.sim.source; }, parse_token_source,
      [](TokenSource s) { return to_string(s); }));
  k.push_back(time_key("run.token_interval", "minimum ps between token injections",
                       [](RunConfig& c) -> SimTime& { return c.sim.token_interval; }));

  k.push_back(time_key("pipeline.forward_delay", "matched request delay per stage, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.forward_delay; }));
  k.push_back(time_key("pipeline.fire_to_phase_delay", "fire to phase toggle, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.fire_to_phase_delay; }));
  k.push_back(time_key("pipeline.clause_eval_delay", "stage 0 datapath, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.clause_eval_delay; }));
  k.push_back(time_key("pipeline.weight_select_delay", "stage 1 datapath, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.weight_select_delay; }));
  k.push_back(time_key("pipeline.sink_ack_delay", "output sink acknowledge, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.sink_ack_delay; }));
  k.push_back(time_key("digital.classify_delay", "stage 2 digital argmax, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.classify_delay; }));

  k.push_back(time_key("bridge.toggle_delay", "two/four-phase converter delay, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.bridge.toggle_delay; }));
  k.push_back(time_key("bridge.timeout", "deadlock timeout, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.bridge.timeout; }));

  k.push_back(time_key("td.tau", "coarse unit delay, ps (divisible by 2^e)",
                       [](RunConfig& c) -> SimTime& { return c.sim.td.tau; }));
  k.push_back(time_key("td.e", "fine resolution bits",
                       [](RunConfig& c) -> unsigned& { return c.sim.td.e; }));
  k.push_back(time_key("td.tdc_resolution", "Vernier TDC step, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.td.tdc_resolution; }));
  k.push_back(time_key("td.tdc_latency", "TDC conversion time, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.td.tdc_latency; }));
  k.push_back(time_key("td.dcde_step", "DCDE step per code, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.td.dcde_step; }));
  k.push_back(time_key("td.dcde_base", "DCDE base delay, ps (0 = derive from model)",
                       [](RunConfig& c) -> SimTime& { return c.sim.td.dcde_base; }));
  k.push_back(time_key("td.tau_hamming", "hamming mode delay per mismatch, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.td.tau_hamming; }));
  k.push_back(time_key("td.lod_width", "class-sum bit width",
                       [](RunConfig& c) -> unsigned& { return c.sim.td.lod_width; }));
  k.push_back(enum_key(
      "td.decode", "per-rail | interval-linear | interval-log",
      [](RunConfig& c) -> DcDecode& { return c.sim.td.decode; }, parse_dc_decode,
      [](DcDecode d) { return to_string(d); }));
  k.push_back(time_key("td.launch_skew", "M rail launch delay after S, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.td.launch_skew; }));
  k.push_back(time_key("td.race_control_delay", "req to raceDR and reset delay, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.td.race_control_delay; }));

  k.push_back(time_key("wta.d_mutex", "mutex delay, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.wta.d_mutex; }));
  k.push_back(time_key("wta.d_or", "OR gate delay, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.wta.d_or; }));
  k.push_back(time_key("wta.d_celement", "C-element delay, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.wta.d_celement; }));
  k.push_back(time_key("wta.delta_meta", "metastability window, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.wta.delta_meta; }));
  k.push_back(time_key("wta.meta_penalty", "extra settling after metastability, ps",
                       [](RunConfig& c) -> SimTime& { return c.sim.wta.meta_penalty; }));
  k.push_back(enum_key(
      "wta.policy", "low-index | seeded-random",
      [](RunConfig& c) -> MetaPolicy& { return c.sim.wta.policy; }, parse_meta_policy,
      [](MetaPolicy p) { return to_string(p); }));

  k.push_back({"metrics.power_w", "supplied power in W for energy efficiency (empty = none)",
               [](const RunConfig& c) {
                 if (!c.sim.power_w) return std::string();
                 std::ostringstream os;
                 os << *c.sim.power_w;
                 return os.str();
               },
               [](RunConfig& c, std::string_view v) {
                 if (v.empty()) {
                   c.sim.power_w.reset();
                   return;
                 }
                 double p = 0;
                 const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), p);
                 if (ec != std::errc{} || ptr != v.data() + v.size() || !(p > 0)) {
                   throw ParseError("metrics.power_w: expected a positive number, got '" +
                                    std::string(v) + "'");
                 }
                 c.sim.power_w = p;
               }});
  str("dataset.thresholds", "raw-value thresholds \"a,b;c,d\" (empty = binary CSV)",
      &RunConfig::thresholds);
  return k;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& k : config_keys()) {
    if (k.name == key) {
      k.set(cfg, trim(value));
      return;
    }
  }
  throw ParseError("unknown config key '" + std::string(key) + "'");
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ParseError("--set: expected key=value, got '" + std::string(assignment) + "'");
  }
  set_config_value(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void parse_config(RunConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    parse_config(cfg, text);
  } catch (const ConfigError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : config_keys()) {
    out += "# " + k.help + "\n" + k.name + " = " + k.get(cfg) + "\n";
  }
  return out;
}

}  // namespace tdtm
