#include "tdtm/reference.hpp"

#include "tdtm/error.hpp"

namespace tdtm {

namespace {

void require_variant(const TmModel& model, Variant v, const char* op) {
  if (model.variant != v) {
    throw ConfigError(std::string(op) + ": requires a " + std::string(to_string(v)) +
                      " model, got " + std::string(to_string(model.variant)));
  }
}

}  // namespace

ClauseVector eval_clauses(const TmModel& model, std::span<const std::uint8_t> literals,
                          std::size_t cls) {
  if (literals.size() != 2 * model.num_features) {
    throw DimensionError("literals: expected " + std::to_string(2 * model.num_features) +
                         " bits, got " + std::to_string(literals.size()));
  }
  ClauseVector out(model.num_clauses);
  for (std::size_t j = 0; j < model.num_clauses; ++j) {
    const Bits& excluded = model.mask(cls, j);
    std::uint8_t fire = 1;
    for (std::size_t l = 0; l < literals.size() && fire; ++l) fire &= literals[l] | excluded[l];
    out[j] = fire;
  }
  return out;
}

std::vector<ClauseVector> eval_all_clauses(const TmModel& model,
                                           std::span<const std::uint8_t> literals) {
  std::vector<ClauseVector> out;
  const std::size_t groups = model.variant == Variant::Multiclass ? model.num_classes : 1;
  out.reserve(groups);
  for (std::size_t i = 0; i < groups; ++i) out.push_back(eval_clauses(model, literals, i));
  return out;
}

ClassSums multiclass_sums(const TmModel& model, std::span<const ClauseVector> per_class) {
  require_variant(model, Variant::Multiclass, "multiclass_sums");
  if (per_class.size() != model.num_classes) {
    throw DimensionError("multiclass_sums: expected one clause vector per class");
  }
  ClassSums sums(model.num_classes, 0);
  for (std::size_t i = 0; i < model.num_classes; ++i) {
    if (per_class[i].size() != model.num_clauses) {
      throw DimensionError("multiclass_sums: clause vector length mismatch");
    }
    for (std::size_t j = 0; j < model.num_clauses; ++j) {
      if (per_class[i][j]) sums[i] += model.polarities[j];
    }
  }
  return sums;
}

ClassSums cotm_sums(const TmModel& model, std::span<const std::uint8_t> clauses) {
  require_variant(model, Variant::Coalesced, "cotm_sums");
  if (clauses.size() != model.num_clauses) {
    throw DimensionError("cotm_sums: clause vector length mismatch");
  }
  ClassSums sums(model.num_classes, 0);
  for (std::size_t i = 0; i < model.num_classes; ++i) {
    // Binary multiplication: the weight is selected when the clause fires.
    for (std::size_t j = 0; j < model.num_clauses; ++j) {
      sums[i] += clauses[j] ? model.weights[i][j] : 0;
    }
  }
  return sums;
}

std::size_t argmax_class(std::span<const std::int64_t> sums) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sums.size(); ++i) {
    if (sums[i] > sums[best]) best = i;
  }
  return best;
}

Inference infer(const TmModel& model, const Sample& sample) {
  if (sample.features.size() != model.num_features) {
    throw DimensionError("sample: expected " + std::to_string(model.num_features) +
                         " features, got " + std::to_string(sample.features.size()));
  }
  Inference r;
  const Bits literals = gen_literals(sample.features);
  r.clauses = eval_all_clauses(model, literals);
  r.sums = model.variant == Variant::Multiclass ? multiclass_sums(model, r.clauses)
                                                : cotm_sums(model, r.clauses.front());
  r.predicted = argmax_class(r.sums);
  return r;
}

}  // namespace tdtm
