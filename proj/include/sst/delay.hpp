#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "sst/core.hpp"

namespace sst {

/// What the delay needs from an accepting run: its input and its output with
/// per-letter provenance. Can be built from an SST run or written by hand.
struct RunTrace {
  Word input;
  AnnotatedOutput output;

  std::size_t length() const { return input.size(); }
};

RunTrace trace_of(const Sst& sst, const Run& run);

/// Number of output positions j' <= j produced by the first t steps.
/// Requires t <= |input| and 1 <= j <= |output|; throws InvalidArgument.
std::size_t weight(const RunTrace& run, std::size_t t, std::size_t j);

struct DelayReport {
  std::size_t C = 0;
  std::vector<std::size_t> cuts;
  /// first_weights[t][k] = weight(first, t, cuts[k]); likewise for second.
  std::vector<std::vector<std::size_t>> first_weights;
  std::vector<std::vector<std::size_t>> second_weights;
  std::size_t delay = 0;
  /// (t, cut position) of the first maximum, if there is any cut.
  std::optional<std::pair<std::size_t, std::size_t>> argmax;
};

/// C-delay of two runs with equal input and equal output. Throws
/// InputMismatch or OutputMismatch, and InvalidArgument for C = 0.
DelayReport delay(const RunTrace& first, const RunTrace& second, std::size_t C);
DelayReport delay(const Sst& sst, const Run& first, const Run& second, std::size_t C);

}  // namespace sst
