#include "tdtm/simulator.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <memory>
#include <string>

#include "tdtm/error.hpp"
#include "tdtm/vcd.hpp"

namespace tdtm {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::DigitalOracle: return "digital-oracle";
    case Mode::HammingTd: return "hamming-td";
    case Mode::CotmIdeal: return "cotm-ideal";
    case Mode::CotmArchitectural: return "cotm-architectural";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  if (s == "digital-oracle") return Mode::DigitalOracle;
  if (s == "hamming-td") return Mode::HammingTd;
  if (s == "cotm-ideal") return Mode::CotmIdeal;
  if (s == "cotm-architectural") return Mode::CotmArchitectural;
  throw ConfigError("mode: expected digital-oracle, hamming-td, cotm-ideal or "
                    "cotm-architectural, got '" + std::string(s) + "'");
}

bool is_time_domain(Mode m) { return m != Mode::DigitalOracle; }

std::string_view to_string(TokenSource s) {
  return s == TokenSource::Pipelined ? "pipelined" : "serialized";
}

TokenSource parse_token_source(std::string_view s) {
  if (s == "pipelined") return TokenSource::Pipelined;
  if (s == "serialized") return TokenSource::Serialized;
  throw ConfigError("run.source: expected pipelined or serialized, got '" + std::string(s) + "'");
}

std::span<const std::string_view> report_scopes() {
  static constexpr std::array<std::string_view, 6> kScopes = {"ctrl",   "clause", "digital",
                                                              "bridge", "td",     "wta"};
  return kScopes;
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

TimeDomainConfig td_for(const SimConfig& cfg) {
  TimeDomainConfig td = cfg.td;
  td.mode = cfg.mode == Mode::CotmIdeal ? TdMode::Ideal : TdMode::Architectural;
  return td;
}

}  // namespace

void SimConfig::validate(const TmModel& model) const {
  model.validate();
  if (mode == Mode::HammingTd && model.variant != Variant::Multiclass) {
    throw ConfigError("mode hamming-td requires a multiclass model, got " +
                      std::string(to_string(model.variant)));
  }
  if ((mode == Mode::CotmIdeal || mode == Mode::CotmArchitectural) &&
      model.variant != Variant::Coalesced) {
    throw ConfigError("mode " + std::string(to_string(mode)) +
                      " requires a coalesced model, got " + std::string(to_string(model.variant)));
  }
  if (sink_ack_delay == 0) throw ConfigError("pipeline.sink_ack_delay: must be positive");
  if (bridge.toggle_delay == 0) throw ConfigError("bridge.toggle_delay: must be positive");
  if (bridge.timeout == 0) throw ConfigError("bridge.timeout: must be positive");
  if (wta.d_mutex == 0) throw ConfigError("wta.d_mutex: must be positive");
  if (wta.d_celement == 0) throw ConfigError("wta.d_celement: must be positive");
  if (is_time_domain(mode)) {
    const TimeDomainConfig td_cfg = td_for(*this);
    td_cfg.validate();
    if (model.variant == Variant::Coalesced) effective_dcde_base(model, td_cfg);
  }
}

namespace {

class StreamSim {
 public:
  StreamSim(const TmModel& model, std::span<const Sample> samples, const SimConfig& cfg,
            bool trace)
      : model_(model), samples_(samples), cfg_(cfg), td_(td_for(cfg)), rng_(cfg.seed) {
    k_.enable_trace(trace);
    results_.resize(samples.size());
    build();
  }

  RunResult run(std::ostream* vcd) {
    request_injection();
    k_.run();
    check();

    RunResult out;
    out.samples = std::move(results_);
    out.events_delivered = k_.stats().delivered;
    out.first_inject = out.samples.front().inject_time;
    for (const auto& s : out.samples) out.last_grant = std::max(out.last_grant, s.grant_time);

    MetricsReport& m = out.metrics;
    m.F = model_.num_features;
    m.C = model_.num_clauses;
    m.K = model_.num_classes;
    m.inferences = out.samples.size();
    m.f_infer = infer_frequency(m.inferences, out.first_inject, out.last_grant);
    m.throughput = throughput(m.F, m.C, m.K, m.f_infer);
    for (auto scope : report_scopes()) m.transitions[std::string(scope)] = 0;
    for (const auto& [scope, n] : collect_transitions(k_)) m.transitions[scope] += n;
    m.transition_proxy = total_transitions(m.transitions);
    std::size_t agree = 0;
    for (const auto& s : out.samples) {
      agree += s.agrees();
      m.meta_events += s.meta_events;
    }
    m.agreement_rate = static_cast<double>(agree) / static_cast<double>(m.inferences);
    if (cfg_.power_w) {
      m.power_w = cfg_.power_w;
      m.energy_efficiency = energy_efficiency(m.throughput / 1e9, *cfg_.power_w);
    }
    if (vcd) write_vcd(*vcd, k_);
    return out;
  }

 private:
  void build() {
    PipelineConfig pc;
    pc.stages.assign(3, StageTiming{cfg_.forward_delay, cfg_.fire_to_phase_delay});
    pc.datapath_delays = {cfg_.clause_eval_delay, cfg_.weight_select_delay,
                          is_time_domain(cfg_.mode) ? SimTime{0} : cfg_.classify_delay};
    pipe_ = build_pipeline(k_, pc);

    const std::size_t K = model_.num_classes;
    const std::size_t C = model_.num_clauses;
    if (model_.variant == Variant::Multiclass) {
      for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
          clause_nets_.push_back(
              k_.add_signal("clause", "k" + std::to_string(i) + "_c" + std::to_string(j)));
        }
      }
    } else {
      for (std::size_t j = 0; j < C; ++j) {
        clause_nets_.push_back(k_.add_signal("clause", "c" + std::to_string(j)));
      }
    }

    pipe_->on_fire([this](std::size_t stage, std::uint64_t token) { on_stage(stage, token); });
    // Serialized: one token in flight, the next enters once the sink handshake
    // (including any four-phase return to zero) has closed.
    const SignalId trigger =
        cfg_.source == TokenSource::Pipelined ? pipe_->in_ack() : pipe_->out_ack();
    k_.on_edge(trigger, Edge::Any, [this](const Signal&) { request_injection(); });

    if (!is_time_domain(cfg_.mode)) {
      for (std::size_t i = 0; i < K; ++i) {
        class_nets_.push_back(k_.add_signal("digital", "class" + std::to_string(i)));
      }
      k_.on_edge(pipe_->out_req(), Edge::Any, [this](const Signal& s) {
        k_.schedule(pipe_->out_ack(), s.value, k_.now() + cfg_.sink_ack_delay);
      });
      return;
    }

    bridge_ = phase_bridge_2to4(k_, pipe_->out_req(), cfg_.bridge, pipe_->out_ack(), "bridge");
    race_dr_ = k_.add_signal("td", "raceDR");
    for (std::size_t i = 0; i < K; ++i) {
      if (cfg_.mode == Mode::CotmArchitectural) {
        race_s_.push_back(k_.add_signal("td", "raceS" + std::to_string(i)));
        race_m_.push_back(k_.add_signal("td", "raceM" + std::to_string(i)));
      }
      race_.push_back(k_.add_signal("td", "race" + std::to_string(i)));
    }
    for (std::size_t i = 0; i < K; ++i) {
      grant_.push_back(k_.add_signal("wta", "grant" + std::to_string(i)));
    }
    grant_any_ = k_.add_signal("wta", "grant_any");
    completion_ = std::make_unique<CElementGate>(k_, bridge_->four_phase_req(), grant_any_,
                                                 bridge_->four_phase_ack(), cfg_.wta.d_celement);
    k_.on_edge(bridge_->four_phase_req(), Edge::Rising, [this](const Signal&) { launch(); });
    k_.on_edge(bridge_->four_phase_req(), Edge::Falling, [this](const Signal&) { reset_races(); });

    if (model_.variant == Variant::Coalesced) {
      window_ = race_window(model_, td_);
    }
  }

  void request_injection() {
    if (next_ >= samples_.size()) return;
    SimTime at = k_.now();
    if (next_ > 0) at = std::max(at, last_inject_ + cfg_.token_interval);
    const std::size_t n = next_++;
    k_.call_at(at, [this, n] {
      pipe_->set_input_token(n);
      results_[n].inject_time = k_.now();
      last_inject_ = k_.now();
      k_.schedule(pipe_->in_req(), !k_.value(pipe_->in_req()), k_.now());
    });
  }

  void on_stage(std::size_t stage, std::uint64_t token) {
    SampleResult& r = results_[token];
    const Sample& sample = samples_[token];
    switch (stage) {
      case 0: {
        if (sample.features.size() != model_.num_features) {
          throw DimensionError("sample " + std::to_string(token) + ": expected " +
                               std::to_string(model_.num_features) + " features, got " +
                               std::to_string(sample.features.size()));
        }
        Inference inf = infer(model_, sample);
        r.index = token;
        r.label = sample.label;
        r.oracle = inf.predicted;
        r.sums = std::move(inf.sums);
        clauses_.resize(samples_.size());
        clauses_[token] = std::move(inf.clauses);
        std::size_t n = 0;
        for (const auto& vec : clauses_[token]) {
          for (auto bit : vec) {
            k_.schedule(clause_nets_[n++], bit != 0, k_.now() + cfg_.clause_eval_delay);
          }
        }
        break;
      }
      case 1:
        if (cfg_.mode == Mode::HammingTd) {
          r.delays = hamming_race_delays(model_, clauses_[token], td_);
        } else if (is_time_domain(cfg_.mode)) {
          CotmRace race = cotm_race_delays(model_, clauses_[token].front(), td_);
          r.delays = std::move(race.delays);
          r.races = std::move(race.classes);
        }
        clauses_[token].clear();
        break;
      default:
        if (is_time_domain(cfg_.mode)) {
          queue_.push_back(token);
          break;
        }
        const SimTime done = k_.now() + cfg_.classify_delay;
        for (std::size_t i = 0; i < class_nets_.size(); ++i) {
          k_.schedule(class_nets_[i], i == r.oracle, done);
        }
        r.predicted = r.oracle;
        k_.call_at(done, [this, token] { complete(token); });
        break;
    }
  }

  SimTime raise(SignalId net, SimTime at) {
    k_.schedule(net, true, at);
    last_rise_ = std::max(last_rise_, at);
    return at;
  }

  void launch() {
    if (queue_.empty()) throw InvariantViolation("classifier request with no token in flight");
    const std::size_t token = queue_.front();
    queue_.pop_front();
    SampleResult& r = results_[token];

    const SimTime start = raise(race_dr_, k_.now() + td_.race_control_delay);
    SimTime single_rail = start;
    if (cfg_.mode == Mode::CotmArchitectural) {
      for (std::size_t i = 0; i < r.races.size(); ++i) {
        raise(race_s_[i], start + r.races[i].t_S);
        raise(race_m_[i], start + r.races[i].t_M);
      }
      single_rail = start + window_;
    }
    std::vector<SimTime> arrivals(r.delays.size());
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      arrivals[i] = raise(race_[i], single_rail + r.delays[i]);
    }

    const GrantVector g = arbitrate(cfg_.arbiter, arrivals, cfg_.wta, rng_);
    if (!g.one_hot()) {
      throw InvariantViolation("sample " + std::to_string(token) + ": grant vector not one-hot");
    }
    r.predicted = g.winner();
    r.meta_events = g.meta_events;
    raise(grant_[*r.predicted], g.grant_time);
    raise(grant_any_, g.grant_time);
    k_.call_at(g.grant_time, [this, token] { complete(token); });
  }

  void reset_races() {
    const SimTime at = std::max(k_.now(), last_rise_) + td_.race_control_delay;
    k_.schedule(race_dr_, false, at);
    for (auto net : race_s_) k_.schedule(net, false, at);
    for (auto net : race_m_) k_.schedule(net, false, at);
    for (auto net : race_) k_.schedule(net, false, at);
    for (auto net : grant_) k_.schedule(net, false, at);
    k_.schedule(grant_any_, false, at);
  }

  void complete(std::size_t token) {
    results_[token].grant_time = k_.now();
    ++completed_;
  }

  void check() const {
    std::string problems;
    for (const auto& v : pipe_->violations()) problems += "\n  pipeline: " + v;
    if (bridge_) {
      for (const auto& v : bridge_->violations()) problems += "\n  bridge: " + v;
      for (const auto& d : bridge_->deadlocks()) problems += "\n  bridge: " + d;
    }
    if (completed_ != samples_.size()) {
      problems += "\n  only " + std::to_string(completed_) + " of " +
                  std::to_string(samples_.size()) + " samples classified";
    }
    if (!problems.empty()) throw InvariantViolation("simulation failed:" + problems);
  }

  const TmModel& model_;
  std::span<const Sample> samples_;
  const SimConfig& cfg_;
  TimeDomainConfig td_;
  Rng rng_;
  Kernel k_;
  std::unique_ptr<ClickPipeline> pipe_;
  std::unique_ptr<PhaseBridge> bridge_;
  std::unique_ptr<CElementGate> completion_;
  std::vector<SignalId> clause_nets_, class_nets_;
  SignalId race_dr_, grant_any_;
  std::vector<SignalId> race_, race_s_, race_m_, grant_;
  std::vector<SampleResult> results_;
  std::vector<std::vector<ClauseVector>> clauses_;
  std::deque<std::size_t> queue_;
  SimTime window_ = 0;
  SimTime last_rise_ = 0;
  SimTime last_inject_ = 0;
  std::size_t next_ = 0;
  std::size_t completed_ = 0;
};

}  // namespace

RunResult simulate_stream(const TmModel& model, std::span<const Sample> samples,
                          const SimConfig& config, std::ostream* vcd) {
  config.validate(model);
  if (samples.empty()) throw ConfigError("dataset: no samples to simulate");
  StreamSim sim(model, samples, config, vcd != nullptr);
  return sim.run(vcd);
}

SampleResult simulate_sample(const TmModel& model, const Sample& sample, std::size_t index,
                             const SimConfig& config) {
  SimConfig cfg = config;
  cfg.seed = sample_seed(config.seed, index);
  RunResult run = simulate_stream(model, std::span<const Sample>(&sample, 1), cfg);
  SampleResult r = std::move(run.samples.front());
  r.index = index;
  return r;
}

}  // namespace tdtm
