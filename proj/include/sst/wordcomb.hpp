#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sst/core.hpp"
#include "sst/parallel.hpp"

namespace sst {

using ParamId = std::uint32_t;
/// Values of the formal parameters, indexed by ParamId.
using Assignment = std::vector<std::uint64_t>;

/// Shortest r with w in r*. Throws InvalidArgument on the empty word.
Word primitive_root(std::string_view w);

/// The C-cuts of w: greedy right-most factor ends such that every factor
/// has a primitive root of length at most C. The last cut is |w| for a
/// nonempty w; the empty word has no cuts.
std::vector<std::size_t> cuts(std::string_view w, std::size_t C);

struct Factor {
  Word base;
  ParamId param = 0;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// s0 t1^{p1} s1 ... tm^{pm} sm. Parameter ids may repeat.
class ParamWord {
 public:
  ParamWord() : constants_(1) {}
  static ParamWord constant(Word w);

  void append(std::string_view letters) { constants_.back() += letters; }
  void append(char c) { constants_.back().push_back(c); }
  void append_factor(Word base, ParamId param);
  void append(const ParamWord& other);

  const std::vector<Word>& constants() const { return constants_; }
  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t repetitions() const { return factors_.size(); }

  friend bool operator==(const ParamWord&, const ParamWord&) = default;

 private:
  std::vector<Word> constants_;  // factors_.size() + 1 entries
  std::vector<Factor> factors_;
};

std::string to_string(const ParamWord& p);

/// The pair (left, right) asserting left != right.
struct Inequality {
  ParamWord left;
  ParamWord right;

  /// Sorted, duplicate-free parameter ids of both sides.
  std::vector<ParamId> parameters() const;
};

/// Throws MissingParameter when the assignment does not cover a parameter.
Word instantiate(const ParamWord& p, const Assignment& values);
bool is_solution(const Inequality& e, const Assignment& values);

/// Values in [0, bound] that are not solutions of a one-parameter inequality.
/// Throws InvalidArgument unless exactly one parameter id occurs.
std::vector<std::uint64_t> nonsolutions_single(const Inequality& e, std::uint64_t bound);

struct Range {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend bool operator==(const Range&, const Range&) = default;
};
/// One inclusive range per ParamId.
using Box = std::vector<Range>;

/// First assignment in the box, in lexicographic order with parameter 0 most
/// significant, that solves every inequality of the system.
/// Throws EmptySystem on an empty system.
std::optional<Assignment> find_system_solution(std::span<const Inequality> system,
                                               const Box& box, Exec exec = Exec::Parallel);

/// Searches intervals [lo_i, lo_i + sizes_i] inside [0, bound] whose product
/// lies in sol(e). Lower ends are scanned lexicographically following
/// `order` (a permutation of the parameter ids; empty means 0, 1, ...).
/// Every returned box has been checked point by point. Throws NotASolution
/// if `seed` does not solve e.
std::optional<Box> find_solution_box(const Inequality& e, const Assignment& seed,
                                     std::span<const std::uint64_t> sizes,
                                     std::uint64_t bound,
                                     std::span<const ParamId> order = {});

}  // namespace sst
