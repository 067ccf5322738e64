#include "sst/decompose.hpp"

#include <algorithm>
#include <set>

#include "sst/delay.hpp"
#include "sst/oracle.hpp"

namespace sst {

std::strong_ordering lex_compare(const Sst& sst, const Run& a, const Run& b) {
  if (input_of(sst, a) != input_of(sst, b))
    throw Error(ErrorCode::InputMismatch, "runs on different inputs are not ordered");
  if (auto c = a.start <=> b.start; c != 0) return c;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const auto c = sst.transition_rank(a.steps[i]) <=> sst.transition_rank(b.steps[i]);
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::vector<Run> semantic_cover(const Sst& sst, std::string_view input, std::size_t C,
                                std::size_t D, std::size_t budget) {
  std::vector<Run> runs = enumerate_runs(sst, input, budget);
  std::vector<RunTrace> traces;
  traces.reserve(runs.size());
  for (const auto& r : runs) traces.push_back(trace_of(sst, r));

  std::vector<Run> kept;
  for (std::size_t j = 0; j < runs.size(); ++j) {
    bool separated = true;
    for (std::size_t i = 0; i < j && separated; ++i) {
      if (traces[i].output.word != traces[j].output.word) continue;
      if (delay(traces[i], traces[j], C).delay <= D) separated = false;
    }
    if (separated) kept.push_back(runs[j]);
  }
  return kept;
}

std::vector<Word> outputs_by_witness(const Sst& sst, std::string_view input, std::size_t budget) {
  std::vector<Word> result;
  std::set<Word> seen;
  for (const auto& r : enumerate_runs(sst, input, budget)) {
    Word out = eval_run(sst, r).word;
    if (seen.insert(out).second) result.push_back(std::move(out));
  }
  return result;
}

SelectorFamily::SelectorFamily(const Sst& sst, std::size_t k, std::size_t budget)
    : sst_(sst), k_(k), budget_(budget) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "a decomposition needs k >= 1");
}

std::optional<Word> SelectorFamily::select(std::size_t i, std::string_view input) const {
  if (i >= k_) throw Error(ErrorCode::InvalidArgument, "selector index out of range");
  auto outs = outputs_by_witness(sst_, input, budget_);
  if (i >= outs.size()) return std::nullopt;
  return std::move(outs[i]);
}

std::vector<std::optional<Word>> SelectorFamily::row(std::string_view input) const {
  auto outs = outputs_by_witness(sst_, input, budget_);
  std::vector<std::optional<Word>> result(k_);
  for (std::size_t i = 0; i < k_ && i < outs.size(); ++i) result[i] = std::move(outs[i]);
  return result;
}

EquivalenceResult check_equivalence_bounded(const Sst& a, const Sst& b, std::size_t max_len,
                                            std::size_t budget, Exec exec) {
  std::string la = a.alphabet();
  std::string lb = b.alphabet();
  std::ranges::sort(la);
  std::ranges::sort(lb);
  if (la != lb)
    throw Error(ErrorCode::AlphabetMismatch,
                "alphabets differ: '" + a.alphabet() + "' vs '" + b.alphabet() + "'");

  EquivalenceResult result;
  const WordSpace space(a.alphabet(), 1, max_len);
  if (space.size() > budget)
    throw Error(ErrorCode::BudgetExceeded,
                "input space of " + std::to_string(space.size()) + " words exceeds the budget");
  const auto first = find_first(
      space.size(),
      [&](std::size_t i) {
        const Word u = space.at(i);
        return outputs(a, u, budget) != outputs(b, u, budget);
      },
      exec);
  if (!first) {
    result.inputs_scanned = space.size();
    return result;
  }
  result.equal = false;
  result.inputs_scanned = *first + 1;
  result.counterexample = space.at(*first);
  result.first_outputs = outputs(a, *result.counterexample, budget);
  result.second_outputs = outputs(b, *result.counterexample, budget);
  return result;
}

}  // namespace sst
