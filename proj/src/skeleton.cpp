#include "sst/skeleton.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace sst {

Skeleton Skeleton::identity(std::size_t num_vars) {
  Skeleton s;
  s.images.resize(num_vars);
  for (VarId x = 0; x < num_vars; ++x) s.images[x] = {x};
  return s;
}

Skeleton skeleton_of(const Update& u) {
  Skeleton s;
  s.images.resize(u.num_vars());
  for (VarId x = 0; x < u.num_vars(); ++x)
    for (Sym sym : u[x])
      if (sym.is_var()) s.images[x].push_back(sym.as_var());
  return s;
}

Skeleton compose(const Skeleton& first, const Skeleton& second) {
  Skeleton out;
  out.images.resize(second.images.size());
  for (std::size_t x = 0; x < second.images.size(); ++x)
    for (VarId y : second.images[x])
      out.images[x].insert(out.images[x].end(), first.images[y].begin(), first.images[y].end());
  return out;
}

bool is_idempotent(const Skeleton& s) { return compose(s, s) == s; }

std::vector<Skeleton> skeleton_monoid(const Sst& sst, std::size_t cap) {
  std::vector<Skeleton> generators;
  for (const auto& tr : sst.transitions()) generators.push_back(skeleton_of(tr.update));
  std::set<Skeleton> seen{Skeleton::identity(sst.num_vars())};
  std::vector<Skeleton> elements{Skeleton::identity(sst.num_vars())};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : generators) {
      Skeleton next = compose(elements[i], g);
      if (seen.insert(next).second) {
        if (elements.size() >= cap)
          throw Error(ErrorCode::BudgetExceeded,
                      "skeleton monoid exceeds " + std::to_string(cap) + " elements");
        elements.push_back(std::move(next));
      }
    }
  }
  return elements;
}

std::vector<Interval> find_loops(const Sst& sst, const Run& run) {
  end_state(sst, run);
  std::vector<StateId> states{run.start};
  for (TransId t : run.steps) states.push_back(sst.transition(t).target);

  std::vector<Interval> loops;
  for (std::size_t i = 0; i < run.size(); ++i) {
    Skeleton acc = Skeleton::identity(sst.num_vars());
    for (std::size_t j = i + 1; j <= run.size(); ++j) {
      acc = compose(acc, skeleton_of(sst.transition(run.steps[j - 1]).update));
      if (states[i] == states[j] && is_idempotent(acc)) loops.push_back({i, j});
    }
  }
  return loops;
}

LoopSet make_loop_set(const Sst& sst, const Run& run, std::vector<Interval> intervals) {
  end_state(sst, run);
  std::ranges::sort(intervals);
  std::vector<StateId> states{run.start};
  for (TransId t : run.steps) states.push_back(sst.transition(t).target);

  LoopSet loops;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto [i, j] = intervals[k];
    if (i > j || j > run.size())
      throw Error(ErrorCode::InvalidArgument, "loop interval out of range");
    if (k > 0 && intervals[k - 1].end > i)
      throw Error(ErrorCode::OverlappingLoops, "loop intervals overlap");
    Run block{states[i], {run.steps.begin() + static_cast<std::ptrdiff_t>(i),
                          run.steps.begin() + static_cast<std::ptrdiff_t>(j)}};
    Update u = induced_update(sst, block);
    if (states[i] != states[j] || !is_skeleton_idempotent(u))
      throw Error(ErrorCode::InvalidArgument,
                  "[" + std::to_string(i) + "," + std::to_string(j) + "] is not a loop");
    loops.intervals.push_back({i, j});
    loops.updates.push_back(std::move(u));
  }
  return loops;
}

Run pump(const Sst& sst, const Run& run, const LoopSet& loops,
         std::span<const std::size_t> counts) {
  end_state(sst, run);
  if (counts.size() != loops.intervals.size())
    throw Error(ErrorCode::InvalidArgument, "one count per loop is required");
  for (std::size_t k = 0; k < loops.intervals.size(); ++k) {
    if (counts[k] == 0) throw Error(ErrorCode::InvalidArgument, "pumping counts must be positive");
    if (k > 0 && loops.intervals[k - 1].end > loops.intervals[k].begin)
      throw Error(ErrorCode::OverlappingLoops, "loop intervals overlap");
  }

  Run out{run.start, {}};
  std::size_t pos = 0;
  auto step = [&](std::size_t i) { return run.steps.begin() + static_cast<std::ptrdiff_t>(i); };
  for (std::size_t k = 0; k < loops.intervals.size(); ++k) {
    const auto [i, j] = loops.intervals[k];
    out.steps.insert(out.steps.end(), step(pos), step(i));
    for (std::size_t c = 0; c < counts[k]; ++c) out.steps.insert(out.steps.end(), step(i), step(j));
    pos = j;
  }
  out.steps.insert(out.steps.end(), step(pos), run.steps.end());
  return out;
}

std::pair<Word, Word> idempotent_power_words(const Update& u, VarId x) {
  if (!is_skeleton_idempotent(u))
    throw Error(ErrorCode::NotIdempotent, "update is not skeleton-idempotent");
  const Image& image = u[x];
  if (!has_variable(image)) return {};

  const auto self = std::ranges::find(image, Sym::var(x));
  if (self == image.end())
    throw Error(ErrorCode::NotIdempotent, "idempotent image lacks its own variable");
  const Image head(image.begin(), self);
  const Image tail(self + 1, image.end());
  const Image left = substitute(head, u);
  const Image right = substitute(tail, u);
  if (has_variable(left) || has_variable(right))
    throw Error(ErrorCode::NotIdempotent, "pumped context still contains variables");
  return {evaluate(left, {}), evaluate(right, {})};
}

namespace {

using SymbolicValuation = std::vector<ParamWord>;

ParamWord substitute_symbolic(const Image& image, const SymbolicValuation& values) {
  ParamWord out;
  for (Sym s : image) {
    if (s.is_var()) {
      out.append(values[s.as_var()]);
    } else {
      out.append(s.as_letter());
    }
  }
  return out;
}

SymbolicValuation apply_symbolic(const Update& u, const SymbolicValuation& values) {
  SymbolicValuation out;
  out.reserve(u.num_vars());
  for (const auto& image : u.images) out.push_back(substitute_symbolic(image, values));
  return out;
}

}  // namespace

ParamWord pumped_output_expr(const Sst& sst, const Run& run, const LoopSet& loops) {
  if (!is_accepting(sst, run))
    throw Error(ErrorCode::NotAccepting, "pumped output requires an accepting run");

  SymbolicValuation values;
  for (const auto& w : sst.initial_assignment()) values.push_back(ParamWord::constant(w));

  std::size_t pos = 0;
  auto advance_to = [&](std::size_t until) {
    for (; pos < until; ++pos) values = apply_symbolic(sst.transition(run.steps[pos]).update, values);
  };

  for (std::size_t k = 0; k < loops.intervals.size(); ++k) {
    const auto [i, j] = loops.intervals[k];
    advance_to(i);
    const Update& u = loops.updates[k];
    SymbolicValuation next;
    for (VarId x = 0; x < sst.num_vars(); ++x) {
      ParamWord body = substitute_symbolic(u[x], values);
      if (!has_variable(u[x])) {
        next.push_back(std::move(body));
        continue;
      }
      auto [left, right] = idempotent_power_words(u, x);
      ParamWord pumped;
      if (!left.empty()) pumped.append_factor(left, static_cast<ParamId>(k));
      pumped.append(body);
      if (!right.empty()) pumped.append_factor(right, static_cast<ParamId>(k));
      next.push_back(std::move(pumped));
    }
    values = std::move(next);
    pos = j;
  }
  advance_to(run.size());
  return substitute_symbolic(sst.final_output(end_state(sst, run)), values);
}

Word instantiate_pumped(const ParamWord& expr, std::span<const std::size_t> counts) {
  Assignment values(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) throw Error(ErrorCode::InvalidArgument, "pumping counts must be positive");
    values[i] = counts[i] - 1;
  }
  return instantiate(expr, values);
}

}  // namespace sst
