#include "sst/core.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace sst {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::UnknownSymbol: return "unknown-symbol";
    case ErrorCode::CopylessViolation: return "copyless-violation";
    case ErrorCode::VariableMismatch: return "variable-mismatch";
    case ErrorCode::InvalidRun: return "invalid-run";
    case ErrorCode::NotAccepting: return "not-accepting";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::MissingParameter: return "missing-parameter";
    case ErrorCode::NotIdempotent: return "not-idempotent";
    case ErrorCode::InputMismatch: return "input-mismatch";
    case ErrorCode::OutputMismatch: return "output-mismatch";
    case ErrorCode::OverlappingLoops: return "overlapping-loops";
    case ErrorCode::NotASolution: return "not-a-solution";
    case ErrorCode::EmptySystem: return "empty-system";
    case ErrorCode::AlphabetMismatch: return "alphabet-mismatch";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Updates

Update Update::identity(std::size_t num_vars) {
  Update u;
  u.images.resize(num_vars);
  for (VarId x = 0; x < num_vars; ++x) u.images[x] = {Sym::var(x)};
  return u;
}

std::optional<VarId> copyless_violation(const Update& u) {
  std::vector<bool> seen(u.num_vars(), false);
  for (const auto& image : u.images) {
    for (Sym s : image) {
      if (!s.is_var()) continue;
      if (s.as_var() >= seen.size()) return s.as_var();
      if (seen[s.as_var()]) return s.as_var();
      seen[s.as_var()] = true;
    }
  }
  return std::nullopt;
}

bool has_variable(const Image& image) {
  return std::ranges::any_of(image, [](Sym s) { return s.is_var(); });
}

Image substitute(const Image& image, const Update& u) {
  Image out;
  out.reserve(image.size());
  for (Sym s : image) {
    if (s.is_var()) {
      const auto& sub = u.images.at(s.as_var());
      out.insert(out.end(), sub.begin(), sub.end());
    } else {
      out.push_back(s);
    }
  }
  return out;
}

Update compose_updates(const Update& first, const Update& second) {
  if (first.num_vars() != second.num_vars()) {
    throw Error(ErrorCode::VariableMismatch,
                "cannot compose updates over " + std::to_string(first.num_vars()) +
                    " and " + std::to_string(second.num_vars()) + " variables");
  }
  Update out;
  out.images.reserve(second.num_vars());
  for (const auto& image : second.images) out.images.push_back(substitute(image, first));
  return out;
}

Update power(const Update& u, std::size_t n) {
  Update out = Update::identity(u.num_vars());
  for (std::size_t i = 0; i < n; ++i) out = compose_updates(out, u);
  return out;
}

Word evaluate(const Image& image, const Valuation& values) {
  Word out;
  for (Sym s : image) {
    if (s.is_var()) {
      out += values.at(s.as_var());
    } else {
      out.push_back(s.as_letter());
    }
  }
  return out;
}

Valuation apply(const Update& u, const Valuation& values) {
  Valuation out;
  out.reserve(u.num_vars());
  for (const auto& image : u.images) out.push_back(evaluate(image, values));
  return out;
}

// ---------------------------------------------------------------------------
// Sst

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

void check_image(const SstDefinition& def, const Image& image, const std::string& where) {
  for (Sym s : image) {
    if (s.is_var()) {
      if (s.as_var() >= def.variables.size())
        fail(ErrorCode::UnknownSymbol, where + ": variable index out of range");
    } else if (def.alphabet.find(s.as_letter()) == std::string::npos) {
      fail(ErrorCode::UnknownSymbol,
           where + ": letter '" + std::string(1, s.as_letter()) + "' not in alphabet");
    }
  }
}

}  // namespace

Sst::Sst(SstDefinition def) : def_(std::move(def)) {
  const std::size_t nq = def_.states.size();
  const std::size_t nx = def_.variables.size();
  if (nx == 0) fail(ErrorCode::InvalidArgument, "an SST needs at least one variable");

  letter_lookup_.assign(256, -1);
  for (std::size_t i = 0; i < def_.alphabet.size(); ++i) {
    auto& slot = letter_lookup_[static_cast<unsigned char>(def_.alphabet[i])];
    if (slot != -1) fail(ErrorCode::InvalidArgument, "duplicate alphabet letter");
    slot = static_cast<int>(i);
  }

  initial_flags_.assign(nq, false);
  for (StateId q : def_.initial) {
    if (q >= nq) fail(ErrorCode::UnknownSymbol, "initial state index out of range");
    initial_flags_[q] = true;
  }

  if (def_.initial_assignment.empty()) def_.initial_assignment.assign(nx, Word{});
  if (def_.initial_assignment.size() != nx)
    fail(ErrorCode::VariableMismatch, "initial assignment size differs from variable count");
  for (const auto& w : def_.initial_assignment)
    for (char c : w)
      if (letter_lookup_[static_cast<unsigned char>(c)] < 0)
        fail(ErrorCode::UnknownSymbol, "initial assignment uses a letter outside the alphabet");

  def_.final_output.resize(nq);
  for (StateId q = 0; q < nq; ++q) {
    if (!def_.final_output[q]) continue;
    const auto& image = *def_.final_output[q];
    check_image(def_, image, "final output of " + def_.states[q]);
    Update probe;
    probe.images.assign(nx, {});
    probe.images[0] = image;
    if (auto v = copyless_violation(probe))
      fail(ErrorCode::CopylessViolation, "final output of " + def_.states[q] +
                                             " uses variable " + def_.variables[*v] + " twice");
  }

  for (std::size_t t = 0; t < def_.transitions.size(); ++t) {
    const auto& tr = def_.transitions[t];
    const std::string where = "transition " + std::to_string(t);
    if (tr.source >= nq || tr.target >= nq)
      fail(ErrorCode::UnknownSymbol, where + ": state index out of range");
    if (letter_lookup_[static_cast<unsigned char>(tr.letter)] < 0)
      fail(ErrorCode::UnknownSymbol, where + ": letter not in alphabet");
    if (tr.update.num_vars() != nx)
      fail(ErrorCode::VariableMismatch, where + ": update has wrong arity");
    for (const auto& image : tr.update.images) check_image(def_, image, where);
    if (auto v = copyless_violation(tr.update))
      fail(ErrorCode::CopylessViolation,
           where + ": variable " + def_.variables[*v] + " occurs more than once");
  }

  // Transition order: (source, letter, target, declaration index).
  const std::size_t nt = def_.transitions.size();
  std::vector<TransId> order(nt);
  std::iota(order.begin(), order.end(), TransId{0});
  auto key = [&](TransId t) {
    const auto& tr = def_.transitions[t];
    return std::tuple(tr.source, letter_lookup_[static_cast<unsigned char>(tr.letter)],
                      tr.target, t);
  };
  std::ranges::sort(order, [&](TransId a, TransId b) { return key(a) < key(b); });
  rank_.assign(nt, 0);
  for (std::size_t i = 0; i < nt; ++i) rank_[order[i]] = i;

  const std::size_t nl = def_.alphabet.size();
  outgoing_start_.assign(nq * nl + 1, 0);
  for (TransId t : order) {
    const auto& tr = def_.transitions[t];
    ++outgoing_start_[tr.source * nl +
                      static_cast<std::size_t>(letter_lookup_[static_cast<unsigned char>(tr.letter)]) + 1];
  }
  for (std::size_t i = 1; i < outgoing_start_.size(); ++i)
    outgoing_start_[i] += outgoing_start_[i - 1];
  // `order` is already grouped by (source, letter) and sorted within groups.
  outgoing_ = order;
}

std::optional<StateId> Sst::state_index(std::string_view name) const {
  for (StateId q = 0; q < def_.states.size(); ++q)
    if (def_.states[q] == name) return q;
  return std::nullopt;
}

std::optional<VarId> Sst::var_index(std::string_view name) const {
  for (VarId x = 0; x < def_.variables.size(); ++x)
    if (def_.variables[x] == name) return x;
  return std::nullopt;
}

std::optional<std::size_t> Sst::letter_index(char c) const {
  int i = letter_lookup_[static_cast<unsigned char>(c)];
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

std::span<const TransId> Sst::outgoing(StateId q, std::size_t letter_idx) const {
  const std::size_t slot = q * def_.alphabet.size() + letter_idx;
  return std::span<const TransId>(outgoing_.data() + outgoing_start_[slot],
                                  outgoing_start_[slot + 1] - outgoing_start_[slot]);
}

Update Sst::final_update(StateId q) const {
  Update u;
  u.images.assign(num_vars(), {});
  u.images[0] = final_output(q);
  return u;
}

// ---------------------------------------------------------------------------
// Runs

StateId end_state(const Sst& sst, const Run& run) {
  if (run.start >= sst.num_states()) throw Error(ErrorCode::InvalidRun, "start state out of range");
  StateId q = run.start;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    if (run.steps[i] >= sst.num_transitions())
      throw Error(ErrorCode::InvalidRun, "transition index out of range");
    const auto& tr = sst.transition(run.steps[i]);
    if (tr.source != q)
      throw Error(ErrorCode::InvalidRun, "run breaks at step " + std::to_string(i + 1));
    q = tr.target;
  }
  return q;
}

Word input_of(const Sst& sst, const Run& run) {
  Word w;
  w.reserve(run.size());
  for (TransId t : run.steps) w.push_back(sst.transition(t).letter);
  return w;
}

Update induced_update(const Sst& sst, const Run& run) {
  end_state(sst, run);
  Update u = Update::identity(sst.num_vars());
  for (TransId t : run.steps) u = compose_updates(u, sst.transition(t).update);
  return u;
}

bool is_accepting(const Sst& sst, const Run& run) {
  const StateId last = end_state(sst, run);
  return sst.is_initial(run.start) && sst.is_final(last);
}

Run concat(const Sst& sst, Run a, const Run& b) {
  if (end_state(sst, a) != b.start)
    throw Error(ErrorCode::InvalidRun, "concatenated runs do not chain");
  a.steps.insert(a.steps.end(), b.steps.begin(), b.steps.end());
  return a;
}

namespace {

void require_accepting(const Sst& sst, const Run& run) {
  if (!is_accepting(sst, run))
    throw Error(ErrorCode::NotAccepting, "run does not lead from an initial to a final state");
}

using Tagged = std::vector<std::pair<char, std::uint32_t>>;

}  // namespace

AnnotatedOutput eval_run(const Sst& sst, const Run& run) {
  require_accepting(sst, run);
  std::vector<Tagged> values(sst.num_vars());
  for (VarId x = 0; x < sst.num_vars(); ++x)
    for (char c : sst.initial_assignment()[x]) values[x].emplace_back(c, 0);

  std::uint32_t step = 0;
  for (TransId t : run.steps) {
    ++step;
    const auto& update = sst.transition(t).update;
    std::vector<Tagged> next(sst.num_vars());
    for (VarId x = 0; x < sst.num_vars(); ++x) {
      for (Sym s : update[x]) {
        if (s.is_var()) {
          // Copyless: each old value is consumed at most once.
          auto& src = values[s.as_var()];
          next[x].insert(next[x].end(), src.begin(), src.end());
        } else {
          next[x].emplace_back(s.as_letter(), step);
        }
      }
    }
    values = std::move(next);
  }

  AnnotatedOutput out;
  const auto final_step = static_cast<std::uint32_t>(run.size());
  for (Sym s : sst.final_output(end_state(sst, run))) {
    if (s.is_var()) {
      for (auto [c, k] : values[s.as_var()]) {
        out.word.push_back(c);
        out.steps.push_back(k);
      }
    } else {
      out.word.push_back(s.as_letter());
      out.steps.push_back(final_step);
    }
  }
  return out;
}

Word output_via_composition(const Sst& sst, const Run& run) {
  require_accepting(sst, run);
  const Update beta = induced_update(sst, run);
  const Update with_final = compose_updates(beta, sst.final_update(end_state(sst, run)));
  return evaluate(with_final[0], sst.initial_assignment());
}

namespace {

/// alive[i][q]: some final state is reachable from q by reading input[i..].
std::vector<std::vector<bool>> coreachable_table(const Sst& sst, std::string_view input) {
  const std::size_t n = input.size();
  std::vector<std::vector<bool>> alive(n + 1, std::vector<bool>(sst.num_states(), false));
  for (StateId q = 0; q < sst.num_states(); ++q) alive[n][q] = sst.is_final(q);
  for (std::size_t i = n; i-- > 0;) {
    auto li = sst.letter_index(input[i]);
    if (!li) return alive;  // unknown letter: nothing is alive at i
    for (StateId q = 0; q < sst.num_states(); ++q)
      for (TransId t : sst.outgoing(q, *li))
        if (alive[i + 1][sst.transition(t).target]) {
          alive[i][q] = true;
          break;
        }
  }
  return alive;
}

void check_input(const Sst& sst, std::string_view input) {
  for (char c : input)
    if (!sst.letter_index(c))
      throw Error(ErrorCode::UnknownSymbol,
                  "input letter '" + std::string(1, c) + "' is not in the alphabet");
}

}  // namespace

std::vector<Run> enumerate_runs(const Sst& sst, std::string_view input, std::size_t budget) {
  check_input(sst, input);
  const auto alive = coreachable_table(sst, input);
  std::vector<Run> result;
  std::size_t expansions = 0;
  Run current;

  auto dfs = [&](auto&& self, StateId q, std::size_t pos) -> void {
    if (++expansions > budget)
      throw Error(ErrorCode::BudgetExceeded,
                  "run enumeration exceeded " + std::to_string(budget) + " expansions");
    if (pos == input.size()) {
      if (sst.is_final(q)) result.push_back(current);
      return;
    }
    const std::size_t li = *sst.letter_index(input[pos]);
    for (TransId t : sst.outgoing(q, li)) {
      const StateId next = sst.transition(t).target;
      if (!alive[pos + 1][next]) continue;
      current.steps.push_back(t);
      self(self, next, pos + 1);
      current.steps.pop_back();
    }
  };

  for (StateId q = 0; q < sst.num_states(); ++q) {
    if (!sst.is_initial(q) || !alive[0][q]) continue;
    current.start = q;
    dfs(dfs, q, 0);
  }
  return result;
}

std::uint64_t count_accepting_runs(const Sst& sst, std::string_view input) {
  check_input(sst, input);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  auto add = [](std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; };
  std::vector<std::uint64_t> ways(sst.num_states(), 0);
  for (StateId q = 0; q < sst.num_states(); ++q) ways[q] = sst.is_initial(q) ? 1 : 0;
  for (char c : input) {
    const std::size_t li = *sst.letter_index(c);
    std::vector<std::uint64_t> next(sst.num_states(), 0);
    for (StateId q = 0; q < sst.num_states(); ++q) {
      if (ways[q] == 0) continue;
      for (TransId t : sst.outgoing(q, li)) {
        auto& slot = next[sst.transition(t).target];
        slot = add(slot, ways[q]);
      }
    }
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (StateId q = 0; q < sst.num_states(); ++q)
    if (sst.is_final(q)) total = add(total, ways[q]);
  return total;
}

std::vector<Word> outputs(const Sst& sst, std::string_view input, std::size_t budget) {
  check_input(sst, input);
  const auto alive = coreachable_table(sst, input);
  using Config = std::pair<StateId, Valuation>;
  std::set<Config> frontier;
  for (StateId q = 0; q < sst.num_states(); ++q)
    if (sst.is_initial(q) && alive[0][q]) frontier.emplace(q, sst.initial_assignment());

  std::size_t expansions = 0;
  for (std::size_t pos = 0; pos < input.size(); ++pos) {
    const std::size_t li = *sst.letter_index(input[pos]);
    std::set<Config> next;
    for (const auto& [q, values] : frontier) {
      for (TransId t : sst.outgoing(q, li)) {
        const auto& tr = sst.transition(t);
        if (!alive[pos + 1][tr.target]) continue;
        if (++expansions > budget)
          throw Error(ErrorCode::BudgetExceeded,
                      "output computation exceeded " + std::to_string(budget) + " expansions");
        next.emplace(tr.target, apply(tr.update, values));
      }
    }
    frontier = std::move(next);
  }

  std::set<Word> words;
  for (const auto& [q, values] : frontier)
    if (sst.is_final(q)) words.insert(evaluate(sst.final_output(q), values));
  return {words.begin(), words.end()};
}

std::vector<Word> outputs_by_runs(const Sst& sst, std::string_view input, std::size_t budget) {
  std::set<Word> words;
  for (const auto& run : enumerate_runs(sst, input, budget)) words.insert(eval_run(sst, run).word);
  return {words.begin(), words.end()};
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Sst& sst, const Image& image) {
  std::string out;
  for (Sym s : image) {
    if (!out.empty()) out.push_back(' ');
    if (s.is_var()) {
      out += sst.var_name(s.as_var());
    } else {
      out.push_back(s.as_letter());
    }
  }
  return out;
}

std::string to_string(const Sst& sst, const Update& u) {
  std::string out = "{";
  for (VarId x = 0; x < u.num_vars(); ++x) {
    out += x == 0 ? " " : " ; ";
    out += sst.var_name(x) + " :=";
    const auto rhs = to_string(sst, u[x]);
    if (!rhs.empty()) out += " " + rhs;
  }
  out += " }";
  return out;
}

std::string to_string(const Sst& sst, const Run& run) {
  std::string out = sst.state_name(run.start);
  for (TransId t : run.steps) {
    const auto& tr = sst.transition(t);
    out += " -" + std::string(1, tr.letter) + "/t" + std::to_string(t) + "-> " +
           sst.state_name(tr.target);
  }
  return out;
}

}  // namespace sst
