#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tdtm/simulator.hpp"

namespace tdtm {

struct RunConfig {
  std::string model_path;
  std::string data_path;
  std::string out_dir = "out";
  bool vcd = false;
  // Non-empty: the dataset holds raw values, booleanized with these
  // thresholds ("a,b;c,d", one group per raw column).
  std::string thresholds;
  SimConfig sim;
};

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

// Every tunable, in documentation order.
const std::vector<ConfigKey>& config_keys();

// Throws ParseError for an unknown key or a malformed value.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

// "key=value", as given to --set.
void apply_override(RunConfig& cfg, std::string_view assignment);

// Flat "key = value" lines; '#' starts a comment.
void parse_config(RunConfig& cfg, std::string_view text);
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

// Re-readable dump of every key with its help text as a comment.
std::string dump_config(const RunConfig& cfg);

}  // namespace tdtm
