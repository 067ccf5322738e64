#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sst/core.hpp"
#include "sst/wordcomb.hpp"

namespace sst {

/// An update with all letters erased.
struct Skeleton {
  std::vector<std::vector<VarId>> images;

  static Skeleton identity(std::size_t num_vars);

  friend bool operator==(const Skeleton&, const Skeleton&) = default;
  friend auto operator<=>(const Skeleton&, const Skeleton&) = default;
};

Skeleton skeleton_of(const Update& u);

/// Skeleton product in run order: `first`, then `second`.
Skeleton compose(const Skeleton& first, const Skeleton& second);

bool is_idempotent(const Skeleton& s);
inline bool is_skeleton_idempotent(const Update& u) { return is_idempotent(skeleton_of(u)); }

/// Closure of the transition skeletons (plus the identity) under product.
/// Throws BudgetExceeded beyond `cap` elements.
std::vector<Skeleton> skeleton_monoid(const Sst& sst, std::size_t cap = 1'000'000);

/// A position interval [begin, end] of a run; positions lie between
/// transitions, so 0 <= begin <= end <= |run|.
struct Interval {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Pairwise disjoint loops of one run with their induced updates.
struct LoopSet {
  std::vector<Interval> intervals;  // ascending, non-overlapping
  std::vector<Update> updates;
};

/// Every [i, j], i < j, whose endpoints carry the same state and whose
/// induced update is skeleton-idempotent. Ordered by (i, j).
std::vector<Interval> find_loops(const Sst& sst, const Run& run);

/// Validates and sorts the intervals. Empty intervals are allowed and carry
/// the identity. Throws OverlappingLoops or InvalidArgument.
LoopSet make_loop_set(const Sst& sst, const Run& run, std::vector<Interval> intervals);

/// Repeats the transitions of loop i counts[i] times (counts[i] >= 1).
Run pump(const Sst& sst, const Run& run, const LoopSet& loops,
         std::span<const std::size_t> counts);

/// Words (left, right) with u^n(x) = left^{n-1} u(x) right^{n-1} for n >= 1.
/// Throws NotIdempotent if u is not skeleton-idempotent.
std::pair<Word, Word> idempotent_power_words(const Update& u, VarId x);

/// Symbolic output of the pumped run: parameter i stands for counts[i] - 1.
/// Factors with an empty base are dropped. Throws NotAccepting.
ParamWord pumped_output_expr(const Sst& sst, const Run& run, const LoopSet& loops);

/// instantiate() with each parameter shifted: parameter i takes counts[i] - 1.
Word instantiate_pumped(const ParamWord& expr, std::span<const std::size_t> counts);

}  // namespace sst
