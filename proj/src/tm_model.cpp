#include "tdtm/tm_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tdtm/error.hpp"

namespace tdtm {

using nlohmann::json;

std::string_view to_string(Variant v) {
  return v == Variant::Multiclass ? "multiclass" : "coalesced";
}

std::vector<std::int8_t> default_polarities(std::size_t num_clauses) {
  std::vector<std::int8_t> p(num_clauses);
  for (std::size_t j = 0; j < num_clauses; ++j) p[j] = (j % 2 == 0) ? 1 : -1;
  return p;
}

void TmModel::validate() const {
  if (num_features == 0) throw DimensionError("num_features: must be positive");
  if (num_clauses == 0) throw DimensionError("num_clauses: must be positive");
  if (num_classes == 0) throw DimensionError("num_classes: must be positive");

  const std::size_t expected_masks =
      variant == Variant::Multiclass ? num_classes * num_clauses : num_clauses;
  if (exclude_masks.size() != expected_masks) {
    throw DimensionError("exclude_masks: expected " + std::to_string(expected_masks) +
                         " masks, got " + std::to_string(exclude_masks.size()));
  }
  for (std::size_t i = 0; i < exclude_masks.size(); ++i) {
    if (exclude_masks[i].size() != 2 * num_features) {
      throw DimensionError("exclude_masks[" + std::to_string(i) + "]: exclude mask length " +
                           std::to_string(exclude_masks[i].size()) + ", expected " +
                           std::to_string(2 * num_features));
    }
  }

  if (variant == Variant::Multiclass) {
    if (num_clauses % 2 != 0) {
      throw DimensionError("num_clauses: multiclass variant requires an even clause count, got " +
                           std::to_string(num_clauses));
    }
    if (!weights.empty()) throw DimensionError("weights: not allowed for multiclass variant");
    if (polarities.size() != num_clauses) {
      throw DimensionError("polarities: expected " + std::to_string(num_clauses) + " entries");
    }
    std::size_t positive = 0;
    for (auto p : polarities) {
      if (p != 1 && p != -1) throw ParseError("polarities: entries must be +1 or -1");
      positive += p == 1;
    }
    if (positive * 2 != num_clauses) {
      throw DimensionError("polarities: need exactly C/2 positive and C/2 negative clauses");
    }
  } else {
    if (!polarities.empty()) throw DimensionError("polarities: not allowed for coalesced variant");
    if (weights.size() != num_classes) {
      throw DimensionError("weights: expected " + std::to_string(num_classes) + " rows, got " +
                           std::to_string(weights.size()));
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i].size() != num_clauses) {
        throw DimensionError("weights[" + std::to_string(i) + "]: expected " +
                             std::to_string(num_clauses) + " entries");
      }
    }
  }
}

TmModel TmModel::first_classes(std::size_t k) const {
  if (k == 0 || k > num_classes) {
    throw ConfigError("K: cannot restrict a " + std::to_string(num_classes) +
                      "-class model to " + std::to_string(k) + " classes");
  }
  TmModel m = *this;
  m.num_classes = k;
  if (variant == Variant::Multiclass) {
    m.exclude_masks.resize(k * num_clauses);
  } else {
    m.weights.resize(k);
  }
  return m;
}

Bits booleanize(std::span<const double> raw, const std::vector<std::vector<double>>& thresholds) {
  if (raw.size() != thresholds.size()) {
    throw DimensionError("thresholds: " + std::to_string(thresholds.size()) +
                         " threshold groups for " + std::to_string(raw.size()) + " raw values");
  }
  Bits out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& t = thresholds[i];
    if (!std::is_sorted(t.begin(), t.end())) {
      throw ConfigError("thresholds[" + std::to_string(i) + "]: must be ascending");
    }
    for (double th : t) out.push_back(raw[i] > th ? 1 : 0);
  }
  return out;
}

Bits gen_literals(std::span<const std::uint8_t> features) {
  Bits lit(2 * features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    lit[2 * i] = features[i];
    lit[2 * i + 1] = features[i] ? 0 : 1;
  }
  return lit;
}

namespace {

const json& field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

std::size_t positive_count(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
    throw ParseError(std::string(name) + ": expected a positive integer");
  }
  return v.get<std::size_t>();
}

Bits parse_mask(const json& v, std::size_t index) {
  if (!v.is_string()) {
    throw ParseError("exclude_masks[" + std::to_string(index) + "]: expected a binary string");
  }
  Bits bits;
  for (char c : v.get<std::string>()) {
    if (c != '0' && c != '1') {
      throw ParseError("exclude_masks[" + std::to_string(index) + "]: invalid character '" +
                       std::string(1, c) + "'");
    }
    bits.push_back(c == '1');
  }
  return bits;
}

std::string mask_string(const Bits& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

template <typename T>
std::string join_numbers(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(static_cast<long long>(v[i]));
  }
  return s + "]";
}

bool blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  // std::from_chars for double is available in libstdc++ 11.
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool parse_uint(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

// Yields (1-based line number, cells) for every data row.
template <typename Fn>
void for_each_csv_row(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  bool first = true;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line, ',');
    if (first) {
      first = false;
      double dummy = 0;
      if (!parse_double(cells.front(), dummy)) continue;  // header
    }
    fn(line_no, cells);
  }
}

}  // namespace

TmModel load_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model: malformed text: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model: expected an object at top level");

  TmModel m;
  const json& variant = field(doc, "variant");
  if (variant == "multiclass") {
    m.variant = Variant::Multiclass;
  } else if (variant == "coalesced") {
    m.variant = Variant::Coalesced;
  } else {
    throw ParseError("variant: expected \"multiclass\" or \"coalesced\"");
  }
  m.num_features = positive_count(doc, "num_features");
  m.num_clauses = positive_count(doc, "num_clauses");
  m.num_classes = positive_count(doc, "num_classes");

  const json& masks = field(doc, "exclude_masks");
  if (!masks.is_array()) throw ParseError("exclude_masks: expected an array of binary strings");
  for (std::size_t i = 0; i < masks.size(); ++i) m.exclude_masks.push_back(parse_mask(masks[i], i));

  if (m.variant == Variant::Coalesced) {
    const json& w = field(doc, "weights");
    if (!w.is_array()) throw ParseError("weights: expected K rows of C integers");
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!w[i].is_array()) throw ParseError("weights[" + std::to_string(i) + "]: expected a row");
      std::vector<std::int32_t> row;
      for (const auto& x : w[i]) {
        if (!x.is_number_integer()) {
          throw ParseError("weights[" + std::to_string(i) + "]: entries must be integers");
        }
        row.push_back(x.get<std::int32_t>());
      }
      m.weights.push_back(std::move(row));
    }
    if (doc.contains("polarities")) throw ParseError("polarities: not allowed for coalesced variant");
  } else {
    if (doc.contains("weights")) throw ParseError("weights: not allowed for multiclass variant");
    if (auto it = doc.find("polarities"); it != doc.end()) {
      if (!it->is_array()) throw ParseError("polarities: expected an array of +1/-1");
      for (const auto& x : *it) {
        if (!x.is_number_integer()) throw ParseError("polarities: entries must be +1 or -1");
        auto v = x.get<int>();
        if (v != 1 && v != -1) throw ParseError("polarities: entries must be +1 or -1");
        m.polarities.push_back(static_cast<std::int8_t>(v));
      }
    } else if (m.num_clauses % 2 == 0) {
      m.polarities = default_polarities(m.num_clauses);
    }
  }

  m.validate();
  return m;
}

std::string save_model(const TmModel& m) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"variant\": \"" << to_string(m.variant) << "\",\n";
  out << "  \"num_features\": " << m.num_features << ",\n";
  out << "  \"num_clauses\": " << m.num_clauses << ",\n";
  out << "  \"num_classes\": " << m.num_classes << ",\n";
  out << "  \"exclude_masks\": [\n";
  for (std::size_t i = 0; i < m.exclude_masks.size(); ++i) {
    out << "    \"" << mask_string(m.exclude_masks[i]) << '"'
        << (i + 1 < m.exclude_masks.size() ? ",\n" : "\n");
  }
  out << "  ]";
  if (m.variant == Variant::Coalesced) {
    out << ",\n  \"weights\": [\n";
    for (std::size_t i = 0; i < m.weights.size(); ++i) {
      out << "    " << join_numbers(m.weights[i]) << (i + 1 < m.weights.size() ? ",\n" : "\n");
    }
    out << "  ]";
  } else {
    out << ",\n  \"polarities\": " << join_numbers(m.polarities);
  }
  out << "\n}\n";
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TmModel load_model_file(const std::filesystem::path& path) {
  auto text = read_text_file(path);
  try {
    return load_model(text);
  } catch (const ConfigError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<Sample> load_dataset(std::string_view text, std::size_t num_features) {
  std::vector<Sample> out;
  for_each_csv_row(text, [&](std::size_t line, const std::vector<std::string_view>& cells) {
    const std::string where = "dataset line " + std::to_string(line);
    if (cells.size() != num_features && cells.size() != num_features + 1) {
      throw DimensionError(where + ": expected " + std::to_string(num_features) +
                           " feature columns (plus optional label), got " +
                           std::to_string(cells.size()));
    }
    Sample s;
    for (std::size_t i = 0; i < num_features; ++i) {
      if (cells[i] != "0" && cells[i] != "1") {
        throw ParseError(where + " column " + std::to_string(i + 1) + ": expected 0 or 1");
      }
      s.features.push_back(cells[i] == "1");
    }
    if (cells.size() == num_features + 1) {
      std::size_t label = 0;
      if (!parse_uint(cells.back(), label)) throw ParseError(where + ": label must be a class index");
      s.label = label;
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<Sample> load_dataset_file(const std::filesystem::path& path, std::size_t num_features) {
  return load_dataset(read_text_file(path), num_features);
}

std::vector<Sample> load_raw_dataset(std::string_view text,
                                     const std::vector<std::vector<double>>& thresholds) {
  std::vector<Sample> out;
  const std::size_t n = thresholds.size();
  for_each_csv_row(text, [&](std::size_t line, const std::vector<std::string_view>& cells) {
    const std::string where = "dataset line " + std::to_string(line);
    if (cells.size() != n && cells.size() != n + 1) {
      throw DimensionError(where + ": expected " + std::to_string(n) + " raw columns");
    }
    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!parse_double(cells[i], raw[i])) throw ParseError(where + ": not a number");
    }
    Sample s{booleanize(raw, thresholds), std::nullopt};
    if (cells.size() == n + 1) {
      std::size_t label = 0;
      if (!parse_uint(cells.back(), label)) throw ParseError(where + ": label must be a class index");
      s.label = label;
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<std::vector<double>> parse_thresholds(std::string_view text) {
  std::vector<std::vector<double>> out;
  for (auto group : split(trim(text), ';')) {
    std::vector<double> g;
    for (auto cell : split(group, ',')) {
      double v = 0;
      if (!parse_double(cell, v)) {
        throw ParseError("thresholds: '" + std::string(cell) + "' is not a number");
      }
      g.push_back(v);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace tdtm
