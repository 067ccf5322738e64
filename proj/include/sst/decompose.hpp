#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "sst/core.hpp"
#include "sst/parallel.hpp"

namespace sst {

/// Runs on the same input compared by start state, then transition by
/// transition in the order of Sst::transition_rank. Throws InputMismatch.
std::strong_ordering lex_compare(const Sst& sst, const Run& a, const Run& b);

/// Accepting runs on `input` that have no lexicographically smaller run with
/// the same output within C-delay D. Ascending in run order.
std::vector<Run> semantic_cover(const Sst& sst, std::string_view input, std::size_t C,
                                std::size_t D, std::size_t budget = kDefaultBudget);

/// Distinct outputs on `input`, ordered by their lexicographically least run.
std::vector<Word> outputs_by_witness(const Sst& sst, std::string_view input,
                                     std::size_t budget = kDefaultBudget);

/// k single-valued functions whose graphs together cover the relation on
/// every input with at most k outputs. select(i, u) is the i-th output of u
/// in witness order (0-based), if there is one.
class SelectorFamily {
 public:
  SelectorFamily(const Sst& sst, std::size_t k, std::size_t budget = kDefaultBudget);

  std::size_t size() const { return k_; }
  std::optional<Word> select(std::size_t i, std::string_view input) const;
  /// All k selector values on one input.
  std::vector<std::optional<Word>> row(std::string_view input) const;

 private:
  const Sst& sst_;
  std::size_t k_;
  std::size_t budget_;
};

struct EquivalenceResult {
  bool equal = true;
  std::optional<Word> counterexample;
  std::vector<Word> first_outputs;  // outputs of each SST on the counterexample
  std::vector<Word> second_outputs;
  std::size_t inputs_scanned = 0;
};

/// Compares output sets on all inputs 1 <= |u| <= max_len in length-lex
/// order. Throws AlphabetMismatch unless both alphabets hold the same letters.
EquivalenceResult check_equivalence_bounded(const Sst& a, const Sst& b, std::size_t max_len,
                                            std::size_t budget = kDefaultBudget,
                                            Exec exec = Exec::Parallel);

}  // namespace sst
