#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tdtm/tm_model.hpp"

namespace tdtm {

using ClauseVector = Bits;
using ClassSums = std::vector<std::int64_t>;

// Clause outputs for one class (multiclass) or the shared pool (coalesced,
// class index ignored). A clause fires iff every included literal is 1; a
// clause with every literal excluded fires.
ClauseVector eval_clauses(const TmModel& model, std::span<const std::uint8_t> literals,
                          std::size_t cls = 0);

// K clause vectors for multiclass, one shared vector for coalesced.
std::vector<ClauseVector> eval_all_clauses(const TmModel& model,
                                           std::span<const std::uint8_t> literals);

// Per class: firing positive clauses minus firing negative clauses.
ClassSums multiclass_sums(const TmModel& model, std::span<const ClauseVector> per_class);

// Per class: sum of the weights of firing clauses.
ClassSums cotm_sums(const TmModel& model, std::span<const std::uint8_t> clauses);

// Index of the largest sum; ties go to the lowest index.
std::size_t argmax_class(std::span<const std::int64_t> sums);

struct Inference {
  std::size_t predicted = 0;
  ClassSums sums;
  std::vector<ClauseVector> clauses;
};

Inference infer(const TmModel& model, const Sample& sample);

}  // namespace tdtm
