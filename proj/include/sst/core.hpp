#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sst/errors.hpp"

namespace sst {

using StateId = std::uint32_t;
using VarId = std::uint32_t;
using TransId = std::uint32_t;
using Word = std::string;

/// Run-prefix expansions allowed to enumeration routines before they fail
/// with ErrorCode::BudgetExceeded.
inline constexpr std::size_t kDefaultBudget = 10'000'000;

/// One symbol of an update right-hand side: an alphabet letter or a variable.
struct Sym {
  enum class Kind : std::uint8_t { Letter, Var };

  Kind kind = Kind::Letter;
  std::uint32_t value = 0;

  static constexpr Sym letter(char c) {
    return {Kind::Letter, static_cast<unsigned char>(c)};
  }
  static constexpr Sym var(VarId v) { return {Kind::Var, v}; }

  constexpr bool is_var() const { return kind == Kind::Var; }
  constexpr char as_letter() const { return static_cast<char>(value); }
  constexpr VarId as_var() const { return value; }

  friend constexpr auto operator<=>(const Sym&, const Sym&) = default;
};

using Image = std::vector<Sym>;
using Valuation = std::vector<Word>;

/// A variable update: images[x] is the new content of variable x, written
/// over letters and the variables' previous contents.
struct Update {
  std::vector<Image> images;

  static Update identity(std::size_t num_vars);

  std::size_t num_vars() const { return images.size(); }
  const Image& operator[](VarId x) const { return images[x]; }
  Image& operator[](VarId x) { return images[x]; }

  friend bool operator==(const Update&, const Update&) = default;
};

/// First variable occurring twice across all images, if any.
std::optional<VarId> copyless_violation(const Update& u);
inline bool is_copyless(const Update& u) { return !copyless_violation(u); }

bool has_variable(const Image& image);

/// Morphic extension of u to a word over letters and variables.
Image substitute(const Image& image, const Update& u);

/// Sequential composition: apply `first`, then `second`.
/// result(X) = first applied morphically to second(X).
Update compose_updates(const Update& first, const Update& second);

/// u composed with itself n times (n = 0 gives the identity).
Update power(const Update& u, std::size_t n);

Word evaluate(const Image& image, const Valuation& values);
Valuation apply(const Update& u, const Valuation& values);

struct Transition {
  StateId source = 0;
  char letter = 0;
  Update update;
  StateId target = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Plain description of an SST. Validated when wrapped into an Sst.
struct SstDefinition {
  std::string alphabet;                // one char per letter, declared order
  std::vector<std::string> variables;  // variables[0] is the output variable
  std::vector<std::string> states;
  std::vector<StateId> initial;
  std::vector<Word> initial_assignment;  // per variable; empty means all ε
  std::vector<std::optional<Image>> final_output;  // per state; nullopt = not final
  std::vector<Transition> transitions;
};

/// A validated, immutable copyless SST with lookup indexes.
class Sst {
 public:
  explicit Sst(SstDefinition def);

  const SstDefinition& definition() const { return def_; }
  const std::string& alphabet() const { return def_.alphabet; }
  std::size_t num_states() const { return def_.states.size(); }
  std::size_t num_vars() const { return def_.variables.size(); }
  std::size_t num_transitions() const { return def_.transitions.size(); }

  const std::string& state_name(StateId q) const { return def_.states[q]; }
  const std::string& var_name(VarId x) const { return def_.variables[x]; }
  std::optional<StateId> state_index(std::string_view name) const;
  std::optional<VarId> var_index(std::string_view name) const;
  std::optional<std::size_t> letter_index(char c) const;

  bool is_initial(StateId q) const { return initial_flags_[q]; }
  bool is_final(StateId q) const { return def_.final_output[q].has_value(); }
  const Image& final_output(StateId q) const { return *def_.final_output[q]; }
  const Valuation& initial_assignment() const { return def_.initial_assignment; }

  const Transition& transition(TransId t) const { return def_.transitions[t]; }
  const std::vector<Transition>& transitions() const { return def_.transitions; }

  /// Transitions leaving q on the letter with the given index, ascending in
  /// the run order (target, then declaration).
  std::span<const TransId> outgoing(StateId q, std::size_t letter_idx) const;

  /// Position of t in the total transition order
  /// (source, letter, target, declaration index).
  std::size_t transition_rank(TransId t) const { return rank_[t]; }

  /// The final update O(q) as an update that maps the output variable to the
  /// final expression and every other variable to ε.
  Update final_update(StateId q) const;

 private:
  SstDefinition def_;
  std::vector<bool> initial_flags_;
  std::vector<std::size_t> rank_;
  std::vector<TransId> outgoing_;           // grouped by (state, letter)
  std::vector<std::size_t> outgoing_start_;  // size states*letters + 1
  std::vector<int> letter_lookup_;          // 256 entries, -1 if absent
};

/// Start state plus the transition sequence; an empty run sits in `start`.
struct Run {
  StateId start = 0;
  std::vector<TransId> steps;

  std::size_t size() const { return steps.size(); }
  friend bool operator==(const Run&, const Run&) = default;
};

/// Output word with, for each letter, the run step that produced it:
/// 0 for initial-assignment letters, t for letters written by the t-th
/// transition, |run| for constants of the final output.
struct AnnotatedOutput {
  Word word;
  std::vector<std::uint32_t> steps;

  friend bool operator==(const AnnotatedOutput&, const AnnotatedOutput&) = default;
};

/// Throws ErrorCode::InvalidRun when consecutive transitions do not chain.
StateId end_state(const Sst& sst, const Run& run);
Word input_of(const Sst& sst, const Run& run);
Update induced_update(const Sst& sst, const Run& run);
bool is_accepting(const Sst& sst, const Run& run);

/// Concatenation; b must start where a ends.
Run concat(const Sst& sst, Run a, const Run& b);

/// Evaluates an accepting run letter by letter, tagging output provenance.
AnnotatedOutput eval_run(const Sst& sst, const Run& run);

/// Second evaluation route: fold compose_updates over the run, then apply the
/// initial assignment and the final output.
Word output_via_composition(const Sst& sst, const Run& run);

/// All accepting runs on `input`, ascending in the lexicographic run order.
std::vector<Run> enumerate_runs(const Sst& sst, std::string_view input,
                                std::size_t budget = kDefaultBudget);

/// Number of accepting runs on `input` (saturating at UINT64_MAX).
std::uint64_t count_accepting_runs(const Sst& sst, std::string_view input);

/// Distinct outputs on `input`, sorted. Tracks deduplicated
/// (state, valuation) configurations instead of individual runs.
std::vector<Word> outputs(const Sst& sst, std::string_view input,
                          std::size_t budget = kDefaultBudget);

/// Brute-force route for outputs(): enumerate every run and evaluate it.
std::vector<Word> outputs_by_runs(const Sst& sst, std::string_view input,
                                  std::size_t budget = kDefaultBudget);

std::string to_string(const Sst& sst, const Image& image);
std::string to_string(const Sst& sst, const Update& u);
std::string to_string(const Sst& sst, const Run& run);

}  // namespace sst
