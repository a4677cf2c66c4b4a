#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tdtm {

// One byte per bit (0 or 1); keeps indexing trivial at desk scale.
using Bits = std::vector<std::uint8_t>;

enum class Variant { Multiclass, Coalesced };

std::string_view to_string(Variant v);

// A trained Tsetlin machine, immutable once validated.
//
// exclude_masks holds one mask of 2F bits per clause; bit 1 means the literal
// is excluded. Multiclass machines own C clauses per class, stored class-major
// (mask index = class * C + clause). Coalesced machines share C clauses across
// all classes and carry a K x C signed weight matrix instead of polarities.
struct TmModel {
  Variant variant = Variant::Multiclass;
  std::size_t num_features = 0;
  std::size_t num_clauses = 0;
  std::size_t num_classes = 0;
  std::vector<Bits> exclude_masks;
  std::vector<std::vector<std::int32_t>> weights;  // coalesced only
  std::vector<std::int8_t> polarities;             // multiclass only, +1 / -1 per clause

  // Throws DimensionError (or ParseError for bad values) on any inconsistency.
  void validate() const;

  const Bits& mask(std::size_t cls, std::size_t clause) const {
    return variant == Variant::Multiclass ? exclude_masks[cls * num_clauses + clause]
                                          : exclude_masks[clause];
  }

  // Copy restricted to the first k classes.
  TmModel first_classes(std::size_t k) const;

  bool operator==(const TmModel&) const = default;
};

// Even clause index positive, odd negative.
std::vector<std::int8_t> default_polarities(std::size_t num_clauses);

struct Sample {
  Bits features;
  std::optional<std::size_t> label;
  bool operator==(const Sample&) const = default;
};

// Thermometer encoding: bit = raw > threshold, thresholds ascending per raw value.
Bits booleanize(std::span<const double> raw, const std::vector<std::vector<double>>& thresholds);

// literal[2i] = feature[i], literal[2i+1] = !feature[i].
Bits gen_literals(std::span<const std::uint8_t> features);

TmModel load_model(std::string_view text);
std::string save_model(const TmModel& model);
TmModel load_model_file(const std::filesystem::path& path);

// CSV with F binary columns and an optional trailing label column. Blank lines
// and lines starting with '#' are skipped; a non-numeric first row is a header.
std::vector<Sample> load_dataset(std::string_view text, std::size_t num_features);
std::vector<Sample> load_dataset_file(const std::filesystem::path& path, std::size_t num_features);

// Raw real-valued CSV booleanized with per-column thresholds.
std::vector<Sample> load_raw_dataset(std::string_view text,
                                     const std::vector<std::vector<double>>& thresholds);

// "4.5,5.0;2.8,3.0" -> {{4.5,5.0},{2.8,3.0}}
std::vector<std::vector<double>> parse_thresholds(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace tdtm
