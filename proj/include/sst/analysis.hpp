#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sst/core.hpp"
#include "sst/oracle.hpp"
#include "sst/parallel.hpp"

namespace sst {

// ---------------------------------------------------------------------------
// Finite ambiguity

/// Two loops joined by a bridge, all three reading the same word v:
///
///     initial --access--> q1 --bridge--> q2 --exit--> final
///                         ^ left_loop    ^ right_loop
///
/// Both loops have skeleton-idempotent updates and at least two of
/// left_loop, bridge, right_loop differ as transition sequences.
struct Dumbbell {
  StateId q1 = 0;
  StateId q2 = 0;
  Run access;
  Run left_loop;
  Run bridge;
  Run right_loop;
  Run exit;
};

/// Description of the first broken invariant, or nullopt if d is a dumbbell.
std::optional<std::string> dumbbell_violation(const Sst& sst, const Dumbbell& d);

struct DumbbellSearchOptions {
  std::size_t monoid_cap = 1'000'000;
  std::size_t node_budget = 10'000'000;
};

/// Exact search over the synchronized three-track product whose tracks
/// accumulate skeletons. Returns the dumbbell with the shortest loop word for
/// the first (q1, q2) pair that has one. Throws BudgetExceeded.
std::optional<Dumbbell> find_dumbbell(const Sst& sst, const DumbbellSearchOptions& options = {});

inline bool is_finite_ambiguous(const Sst& sst, const DumbbellSearchOptions& options = {}) {
  return !find_dumbbell(sst, options).has_value();
}

// ---------------------------------------------------------------------------
// W-patterns

/// enter: station -> r_i on v', loop: r_i -> r_i on v'', leave: r_i -> station on v'''.
struct WComponent {
  Run enter;
  Run loop;
  Run leave;
};

/// components[0] loops at q1 through r1, components[1] leads from q1 to q2
/// through r2, components[2] loops at q2 through r3.
struct WPattern {
  StateId q1 = 0;
  StateId q2 = 0;
  std::array<StateId, 3> r{};
  Run access;  // initial -> q1, reads u
  Run exit;    // q2 -> final, reads w
  std::array<WComponent, 3> components;
};

std::optional<std::string> wpattern_violation(const Sst& sst, const WPattern& p);

/// Positive values with one marked position (0-based `mark`).
struct MarkedSequence {
  std::vector<std::size_t> values;
  std::size_t mark = 0;
};

/// enter (loop)^x leave for component i.
Run component_run(const Sst& sst, const WPattern& p, std::size_t component, std::size_t x);

/// access, left runs before the mark, the middle run at the mark, right runs
/// after it, exit. Throws InvalidArgument for a bad mark or a zero value.
Run build_wrun(const Sst& sst, const WPattern& p, const MarkedSequence& s);

using DivergenceTuple = std::array<std::size_t, 5>;

/// First (n1..n5) in {1,2}^5, lexicographically, for which the W-runs marked
/// at the second and at the fourth position produce different outputs.
std::optional<DivergenceTuple> is_simply_divergent(const Sst& sst, const WPattern& p);

struct WSearchOptions {
  std::size_t component_len = 4;       // max input length per phase (v', v'', v''')
  std::size_t max_candidates = 1'000'000;
  std::size_t max_table_nodes = 1'000'000;
  std::size_t max_access = 8;          // access/exit runs tried per station
  Exec exec = Exec::Parallel;
};

struct WSearchResult {
  std::optional<WPattern> pattern;
  std::optional<DivergenceTuple> tuple;
  std::size_t candidates = 0;
  std::size_t table_nodes = 0;
  std::size_t max_total_len = 0;  // largest |v' v'' v'''| fully explored
  bool budget_exhausted = false;
};

/// Bounded enumeration of W-patterns by increasing |v' v'' v'''|, returning
/// the first simply divergent one in enumeration order.
WSearchResult find_divergent_wpattern(const Sst& sst, const WSearchOptions& options = {});

// ---------------------------------------------------------------------------
// Verdicts

struct Divergence {
  WPattern pattern;
  DivergenceTuple tuple{};
  Word input;
  Word mid_output;    // W-run marked at position 2
  Word right_output;  // W-run marked at position 4
};

struct Verdict {
  enum class Kind { Finite, Infinite, Unknown };

  Kind kind = Kind::Unknown;
  std::optional<Dumbbell> dumbbell;
  std::optional<Divergence> divergence;
  WSearchResult search;
  std::optional<OracleReading> oracle;
  std::string note;
};

const char* to_string(Verdict::Kind kind) noexcept;

struct ValuednessOptions {
  DumbbellSearchOptions dumbbell;
  WSearchOptions search;
  std::size_t oracle_max_len = 6;
  std::size_t oracle_budget = kDefaultBudget;
};

/// No dumbbell: Finite. A verified simply divergent W-pattern: Infinite.
/// Otherwise Unknown, with the search statistics and an oracle reading.
Verdict analyze_valuedness(const Sst& sst, const ValuednessOptions& options = {});

struct Amplification {
  Word input;
  std::vector<Word> outputs;  // pairwise distinct
  std::vector<Run> runs;      // runs[i] produces outputs[i] on input
  MarkedSequence sequence;    // the unmarked sequence shared by all runs
  std::vector<std::size_t> marks;
};

/// Searches sequences t in [1..K]^M for M >= m until m marks give pairwise
/// different outputs on the common input; each run is re-evaluated before it
/// is returned. Throws InvalidArgument if `tuple` does not witness divergence.
std::optional<Amplification> amplify_valuedness(const Sst& sst, const WPattern& p,
                                                const DivergenceTuple& tuple, std::size_t m,
                                                std::size_t budget = 1'000'000);

}  // namespace sst
