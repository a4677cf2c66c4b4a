#include "tdtm/commands.hpp"

#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "tdtm/error.hpp"

namespace tdtm {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

template <typename T, typename F>
std::string joined(const std::vector<T>& items, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += fmt(items[i]);
  }
  return out;
}

std::string to_str(auto v) { return std::to_string(v); }

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
  return cfg.out_dir;
}

TmModel load_run_model(const RunConfig& cfg) {
  if (cfg.model_path.empty()) throw ConfigError("run.model: no model file given");
  return load_model_file(cfg.model_path);
}

}  // namespace

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Sample> load_samples(const RunConfig& cfg, std::size_t num_features) {
  if (cfg.data_path.empty()) throw ConfigError("run.data: no dataset file given");
  if (cfg.thresholds.empty()) return load_dataset_file(cfg.data_path, num_features);
  const auto thresholds = parse_thresholds(cfg.thresholds);
  std::size_t bits = 0;
  for (const auto& t : thresholds) bits += t.size();
  if (bits != num_features) {
    throw DimensionError("dataset.thresholds: yield " + std::to_string(bits) +
                         " features, model expects " + std::to_string(num_features));
  }
  const std::string text = read_text_file(cfg.data_path);
  try {
    return load_raw_dataset(text, thresholds);
  } catch (const ConfigError& e) {
    throw ParseError(cfg.data_path + ": " + e.what());
  }
}

std::string summary_csv_header() {
  std::string h =
      "mode,arbiter,decode,F,C,K,samples,f_infer_hz,throughput_ops,power_w,"
      "energy_efficiency_topj,agreement,meta_events,transitions_total";
  for (auto scope : report_scopes()) h += ",transitions_" + std::string(scope);
  h += ",first_inject_ps,last_grant_ps\n";
  return h;
}

std::string summary_csv_row(const SimConfig& cfg, const RunResult& run) {
  const MetricsReport& m = run.metrics;
  std::string r;
  r += std::string(to_string(cfg.mode)) + "," + std::string(to_string(cfg.arbiter)) + ",";
  r += cfg.mode == Mode::CotmArchitectural ? std::string(to_string(cfg.td.decode)) : "-";
  r += "," + to_str(m.F) + "," + to_str(m.C) + "," + to_str(m.K) + "," + to_str(m.inferences);
  r += "," + num(m.f_infer) + "," + num(m.throughput);
  r += "," + (m.power_w ? num(*m.power_w) : std::string());
  r += "," + (m.energy_efficiency ? num(*m.energy_efficiency) : std::string());
  r += "," + num(m.agreement_rate) + "," + to_str(m.meta_events) + "," +
       to_str(m.transition_proxy);
  for (auto scope : report_scopes()) r += "," + to_str(m.transitions.at(std::string(scope)));
  r += "," + to_str(run.first_inject) + "," + to_str(run.last_grant) + "\n";
  return r;
}

std::string samples_csv(const RunResult& run) {
  std::string out =
      "index,label,oracle,predicted,agree,inject_ps,grant_ps,latency_ps,meta_events,sums,"
      "delays_ps,S,M,k_S,f_S,k_M,f_M,dc,dc_used\n";
  for (const auto& s : run.samples) {
    out += to_str(s.index) + "," + (s.label ? to_str(*s.label) : std::string()) + "," +
           to_str(s.oracle) + "," + (s.predicted ? to_str(*s.predicted) : std::string()) + "," +
           (s.agrees() ? "1" : "0") + "," + to_str(s.inject_time) + "," + to_str(s.grant_time) +
           "," + to_str(s.latency()) + "," + to_str(s.meta_events) + ",";
    out += joined(s.sums, [](auto v) { return to_str(v); }) + ",";
    out += joined(s.delays, [](auto v) { return to_str(v); }) + ",";
    const auto& r = s.races;
    out += joined(r, [](const ClassRace& c) { return to_str(c.split.S); }) + ",";
    out += joined(r, [](const ClassRace& c) { return to_str(c.split.M); }) + ",";
    out += joined(r, [](const ClassRace& c) { return to_str(c.cf_S.k); }) + ",";
    out += joined(r, [](const ClassRace& c) { return to_str(c.cf_S.f); }) + ",";
    out += joined(r, [](const ClassRace& c) { return to_str(c.cf_M.k); }) + ",";
    out += joined(r, [](const ClassRace& c) { return to_str(c.cf_M.f); }) + ",";
    out += joined(r, [](const ClassRace& c) { return to_str(c.dc.dc); }) + ",";
    out += joined(r, [](const ClassRace& c) { return to_str(c.dc_used); }) + "\n";
  }
  return out;
}

std::string report_text(const RunConfig& cfg, const TmModel& model, const RunResult& run) {
  const SimConfig& sim = cfg.sim;
  const MetricsReport& m = run.metrics;
  std::ostringstream os;
  os << "model        " << cfg.model_path << " (" << to_string(model.variant) << ", F=" << m.F
     << " C=" << m.C << " K=" << m.K << ")\n";
  os << "dataset      " << cfg.data_path << " (" << m.inferences << " samples)\n";
  os << "mode         " << to_string(sim.mode);
  if (sim.mode == Mode::CotmArchitectural) os << ", decode " << to_string(sim.td.decode);
  os << "\nsource       " << to_string(sim.source) << ", seed " << sim.seed << "\n";
  std::size_t agree = 0;
  for (const auto& s : run.samples) agree += s.agrees();
  os << "agreement    " << agree << "/" << m.inferences << " with the digital oracle\n";
  os << "f_infer      " << num(m.f_infer) << " Hz (simulated, " << run.first_inject << " to "
     << run.last_grant << " ps)\n";
  os << "throughput   " << num(m.throughput) << " Op/s = 2*F*C*K*f_infer\n";
  if (m.energy_efficiency) {
    os << "efficiency   " << num(*m.energy_efficiency) << " TOp/J at supplied P = "
       << num(*m.power_w) << " W\n";
  } else {
    os << "efficiency   n/a (no metrics.power_w given; transitions below are a relative proxy)\n";
  }
  os << "transitions  " << m.transition_proxy << " total (non-physical proxy)\n";
  for (const auto& [scope, n] : m.transitions) os << "  " << scope << " " << n << "\n";
  if (is_time_domain(sim.mode)) {
    const ArbiterCost cost = arbiter_cost(sim.arbiter, m.K, sim.wta);
    os << "arbiter      " << to_string(sim.arbiter) << ": depth " << cost.depth << ", "
       << cost.cells << " mutex cells, clean latency " << cost.latency << " ps\n";
    if (sim.arbiter == Topology::Tba && (m.K & (m.K - 1)) != 0) {
      os << "             K is not a power of two: " << cost.depth
         << " layers = ceil(log2 K), missing inputs act as byes\n";
    }
    os << "metastable   " << m.meta_events << " events (window " << sim.wta.delta_meta
       << " ps, policy " << to_string(sim.wta.policy) << ")\n";
  }
  return os.str();
}

RunResult cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const TmModel model = load_run_model(cfg);
  const auto samples = load_samples(cfg, model.num_features);
  cfg.sim.validate(model);
  const auto dir = prepare_out_dir(cfg);

  std::ostringstream vcd;
  RunResult run = simulate_stream(model, samples, cfg.sim, cfg.vcd ? &vcd : nullptr);
  write_text_file(dir / "report.csv", summary_csv_header() + summary_csv_row(cfg.sim, run));
  write_text_file(dir / "samples.csv", samples_csv(run));
  const std::string text = report_text(cfg, model, run);
  write_text_file(dir / "report.txt", text);
  if (cfg.vcd) write_text_file(dir / "trace.vcd", vcd.str());
  log << text;
  return run;
}

std::vector<Mode> default_compare_modes(const TmModel& model) {
  if (model.variant == Variant::Multiclass) return {Mode::DigitalOracle, Mode::HammingTd};
  return {Mode::DigitalOracle, Mode::CotmIdeal, Mode::CotmArchitectural};
}

std::vector<RunResult> cmd_compare(const RunConfig& cfg, std::span<const Mode> modes,
                                   std::ostream& log) {
  if (modes.size() < 2) throw ConfigError("compare: needs at least two modes");
  const TmModel model = load_run_model(cfg);
  const auto samples = load_samples(cfg, model.num_features);
  for (Mode m : modes) {
    SimConfig sim = cfg.sim;
    sim.mode = m;
    sim.validate(model);
  }
  const auto dir = prepare_out_dir(cfg);

  std::vector<RunResult> runs;
  std::string csv = summary_csv_header();
  for (Mode m : modes) {
    SimConfig sim = cfg.sim;
    sim.mode = m;
    std::ostringstream vcd;
    runs.push_back(simulate_stream(model, samples, sim, cfg.vcd ? &vcd : nullptr));
    csv += summary_csv_row(sim, runs.back());
    if (cfg.vcd) {
      write_text_file(dir / ("trace_" + std::string(to_string(m)) + ".vcd"), vcd.str());
    }
    log << to_string(m) << ": agreement " << num(runs.back().metrics.agreement_rate)
        << ", f_infer " << num(runs.back().metrics.f_infer) << " Hz, transitions "
        << runs.back().metrics.transition_proxy << "\n";
  }
  write_text_file(dir / "comparison.csv", csv);
  return runs;
}

void apply_sweep_value(RunConfig& cfg, TmModel& model, std::string_view parameter,
                       std::string_view value) {
  if (parameter == "e") {
    const SimTime fine = cfg.sim.td.fine_unit();
    set_config_value(cfg, "td.e", value);
    if (cfg.sim.td.e > 20) throw ConfigError("td.e: at most 20 fine bits supported");
    cfg.sim.td.tau = fine << cfg.sim.td.e;
  } else if (parameter == "tau") {
    set_config_value(cfg, "td.tau", value);
  } else if (parameter == "tdc_resolution") {
    set_config_value(cfg, "td.tdc_resolution", value);
  } else if (parameter == "delta_meta") {
    set_config_value(cfg, "wta.delta_meta", value);
  } else if (parameter == "arbiter") {
    set_config_value(cfg, "run.arbiter", value);
  } else if (parameter == "K") {
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), k);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ParseError("sweep K: expected a class count, got '" + std::string(value) + "'");
    }
    model = model.first_classes(k);
  } else {
    throw ConfigError("sweep: unknown parameter '" + std::string(parameter) +
                      "' (expected e, tau, tdc_resolution, delta_meta, arbiter or K)");
  }
}

std::vector<RunResult> cmd_sweep(const RunConfig& cfg, std::string_view parameter,
                                 std::span<const std::string> values, std::ostream& log) {
  if (values.empty()) throw ConfigError("sweep: empty value list");
  const TmModel model = load_run_model(cfg);
  const auto samples = load_samples(cfg, model.num_features);

  std::vector<RunConfig> cfgs(values.size(), cfg);
  std::vector<TmModel> models(values.size(), model);
  for (std::size_t i = 0; i < values.size(); ++i) {
    apply_sweep_value(cfgs[i], models[i], parameter, values[i]);
    cfgs[i].sim.validate(models[i]);
  }
  const auto dir = prepare_out_dir(cfg);

  std::vector<RunResult> runs(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      runs[idx] = simulate_stream(models[idx], samples, cfgs[idx].sim);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::string csv = "parameter,value,tau_ps,e," + summary_csv_header();
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv += std::string(parameter) + "," + values[i] + "," + to_str(cfgs[i].sim.td.tau) + "," +
           to_str(cfgs[i].sim.td.e) + "," + summary_csv_row(cfgs[i].sim, runs[i]);
    log << parameter << "=" << values[i] << ": agreement " << num(runs[i].metrics.agreement_rate)
        << ", f_infer " << num(runs[i].metrics.f_infer) << " Hz\n";
  }
  write_text_file(dir / "sweep.csv", csv);
  return runs;
}

}  // namespace tdtm
