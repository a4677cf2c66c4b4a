// tdtm: event-driven time-domain Tsetlin machine simulator.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdtm/commands.hpp"
#include "tdtm/config.hpp"
#include "tdtm/error.hpp"

namespace {

std::string key_help() {
  tdtm::RunConfig defaults;
  std::string out = "\nConfiguration keys (config file lines or --set key=value):\n";
  for (const auto& k : tdtm::config_keys()) {
    out += "  " + k.name + " = " + k.get(defaults) + "\n      " + k.help + "\n";
  }
  out += "\nExit codes: 0 ok, 1 usage/config error, 2 I/O error, 3 internal invariant violation\n";
  return out;
}

struct Common {
  std::string config_file, model, data, mode, arbiter, out;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  bool vcd = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_file, "flat key = value config file");
  cmd->add_option("--model", c.model, "model JSON (run.model)");
  cmd->add_option("--data", c.data, "dataset CSV (run.data)");
  cmd->add_option("--mode", c.mode, "digital-oracle | hamming-td | cotm-ideal | cotm-architectural");
  cmd->add_option("--arbiter", c.arbiter, "tba | mesh");
  cmd->add_option("--seed", c.seed, "run.seed");
  cmd->add_option("--out", c.out, "output directory (run.out)");
  cmd->add_flag("--vcd", c.vcd, "write a VCD trace");
  cmd->add_option("--set", c.sets, "override a config key, key=value (repeatable)");
}

// Config file first, then dedicated flags, then --set in order.
tdtm::RunConfig resolve(const Common& c, const CLI::App* cmd) {
  tdtm::RunConfig cfg;
  if (!c.config_file.empty()) tdtm::load_config_file(cfg, c.config_file);
  if (!c.model.empty()) cfg.model_path = c.model;
  if (!c.data.empty()) cfg.data_path = c.data;
  if (!c.mode.empty()) cfg.sim.mode = tdtm::parse_mode(c.mode);
  if (!c.arbiter.empty()) cfg.sim.arbiter = tdtm::parse_topology(c.arbiter);
  if (cmd->count("--seed")) cfg.sim.seed = c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.vcd) cfg.vcd = true;
  for (const auto& s : c.sets) tdtm::apply_override(cfg, s);
  return cfg;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  if (!item.empty() || !out.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven simulator for time-domain Tsetlin machine inference"};
  app.footer(key_help());
  app.require_subcommand(1);

  Common sim_opts, cmp_opts, sweep_opts, print_opts;
  auto* simulate = app.add_subcommand("simulate", "run one mode over a dataset");
  add_common(simulate, sim_opts);

  auto* compare = app.add_subcommand("compare", "run several modes on the same samples");
  add_common(compare, cmp_opts);
  std::string modes;
  compare->add_option("--modes", modes, "comma-separated modes (default: all that fit the model)");

  auto* sweep = app.add_subcommand("sweep", "repeat a run over values of one parameter");
  add_common(sweep, sweep_opts);
  std::string param, values;
  sweep->add_option("--param", param, "e | tau | tdc_resolution | delta_meta | arbiter | K")
      ->required();
  sweep->add_option("--values", values, "comma-separated values")->required();

  auto* print = app.add_subcommand("print-config", "print every key with its resolved value");
  add_common(print, print_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) {
      tdtm::cmd_simulate(resolve(sim_opts, simulate), std::cout);
    } else if (*compare) {
      const auto cfg = resolve(cmp_opts, compare);
      std::vector<tdtm::Mode> list;
      if (modes.empty()) {
        list = tdtm::default_compare_modes(tdtm::load_model_file(cfg.model_path));
      } else {
        for (const auto& m : split_list(modes)) list.push_back(tdtm::parse_mode(m));
      }
      tdtm::cmd_compare(cfg, list, std::cout);
    } else if (*sweep) {
      const auto list = split_list(values);
      tdtm::cmd_sweep(resolve(sweep_opts, sweep), param, list, std::cout);
    } else if (*print) {
      std::cout << tdtm::dump_config(resolve(print_opts, print));
    }
  } catch (const tdtm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tdtm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tdtm::InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
