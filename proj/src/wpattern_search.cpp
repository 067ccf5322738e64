// Bounded W-pattern enumeration.
//
// A candidate is three synchronized phases over the tracks (left, middle,
// right): enter from (q1, q1, q2) to (r1, r2, r3), loop at (r1, r2, r3), leave
// to (q1, q2, q2). Phases are tabulated once per start triple and length,
// keeping one run triple per (end triple, update triple). Candidates are
// screened on valuations and confirmed through build_wrun and eval_run.

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "analysis_internal.hpp"
#include "sst/analysis.hpp"
#include "sst/skeleton.hpp"

namespace sst {
namespace {

using Triple = std::array<StateId, 3>;

struct PhaseItem {
  Triple end{};
  std::array<Run, 3> runs;
  std::array<Update, 3> updates;
  std::array<Skeleton, 3> skeletons;
};

class BudgetHit {};

class PhaseTables {
 public:
  PhaseTables(const Sst& sst, std::size_t max_nodes) : sst_(sst), max_nodes_(max_nodes) {}

  const std::vector<PhaseItem>& get(const Triple& start, std::size_t len) {
    const auto key = std::pair{start, len};
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    std::vector<PhaseItem> items;
    std::set<std::string> seen;
    std::array<Run, 3> runs{Run{start[0], {}}, Run{start[1], {}}, Run{start[2], {}}};
    std::array<Update, 3> ups{Update::identity(sst_.num_vars()), Update::identity(sst_.num_vars()),
                              Update::identity(sst_.num_vars())};
    extend(start, len, runs, ups, items, seen);
    return tables_.emplace(key, std::move(items)).first->second;
  }

  std::size_t nodes() const { return nodes_; }

 private:
  void extend(const Triple& at, std::size_t left, std::array<Run, 3>& runs,
              std::array<Update, 3>& ups, std::vector<PhaseItem>& items,
              std::set<std::string>& seen) {
    if (++nodes_ > max_nodes_) throw BudgetHit{};
    if (left == 0) {
      std::string key;
      for (int i = 0; i < 3; ++i) {
        key += std::to_string(at[i]) + ':' + detail::update_key(ups[i]) + '\x03';
      }
      if (!seen.insert(key).second) return;
      PhaseItem item{at, runs, ups, {}};
      for (int i = 0; i < 3; ++i) item.skeletons[i] = skeleton_of(ups[i]);
      items.push_back(std::move(item));
      return;
    }
    for (std::size_t li = 0; li < sst_.alphabet().size(); ++li)
      for (TransId t0 : sst_.outgoing(at[0], li))
        for (TransId t1 : sst_.outgoing(at[1], li))
          for (TransId t2 : sst_.outgoing(at[2], li)) {
            const std::array<TransId, 3> ts{t0, t1, t2};
            std::array<Update, 3> saved = ups;
            Triple next{};
            for (int i = 0; i < 3; ++i) {
              runs[i].steps.push_back(ts[i]);
              ups[i] = compose_updates(ups[i], sst_.transition(ts[i]).update);
              next[i] = sst_.transition(ts[i]).target;
            }
            extend(next, left - 1, runs, ups, items, seen);
            for (int i = 0; i < 3; ++i) runs[i].steps.pop_back();
            ups = std::move(saved);
          }
  }

  const Sst& sst_;
  std::size_t max_nodes_;
  std::size_t nodes_ = 0;
  std::map<std::pair<Triple, std::size_t>, std::vector<PhaseItem>> tables_;
};

/// Access runs to q with pairwise different valuations on arrival, shortest first.
struct Access {
  Run run;
  Valuation values;
};

/// Exit runs from q with pairwise different output functions.
struct Exit {
  Run run;
  Image output;  // output over the variables at q
};

constexpr std::size_t kFrontierCap = 4096;

std::vector<Access> access_runs(const Sst& sst, StateId q, std::size_t max_len,
                                std::size_t limit) {
  std::vector<Access> found;
  std::set<Valuation> found_keys;
  std::vector<Access> frontier;
  std::set<std::pair<StateId, Valuation>> seen;
  for (StateId s = 0; s < sst.num_states(); ++s)
    if (sst.is_initial(s)) {
      Valuation v = sst.initial_assignment();
      if (v.empty()) v.assign(sst.num_vars(), Word{});
      seen.insert({s, v});
      frontier.push_back({Run{s, {}}, std::move(v)});
    }
  for (std::size_t len = 0; len <= max_len && !frontier.empty(); ++len) {
    std::vector<Access> next;
    for (auto& a : frontier) {
      const StateId at = end_state(sst, a.run);
      if (at == q && found.size() < limit && found_keys.insert(a.values).second) found.push_back(a);
      if (len == max_len) continue;
      for (std::size_t li = 0; li < sst.alphabet().size(); ++li)
        for (TransId t : sst.outgoing(at, li)) {
          if (next.size() >= kFrontierCap) break;
          Valuation v = sst::apply(sst.transition(t).update, a.values);
          if (!seen.insert({sst.transition(t).target, v}).second) continue;
          Run r = a.run;
          r.steps.push_back(t);
          next.push_back({std::move(r), std::move(v)});
        }
    }
    if (found.size() >= limit) break;
    frontier = std::move(next);
  }
  return found;
}

std::vector<Exit> exit_runs(const Sst& sst, StateId q, std::size_t max_len, std::size_t limit) {
  struct Node {
    Run run;
    Update update;
  };
  std::vector<Exit> found;
  std::set<std::string> found_keys;
  std::vector<Node> frontier{{Run{q, {}}, Update::identity(sst.num_vars())}};
  std::set<std::pair<StateId, std::string>> seen{{q, detail::update_key(frontier[0].update)}};
  for (std::size_t len = 0; len <= max_len && !frontier.empty(); ++len) {
    std::vector<Node> next;
    for (auto& n : frontier) {
      const StateId at = end_state(sst, n.run);
      if (sst.is_final(at) && found.size() < limit) {
        Image out = substitute(sst.final_output(at), n.update);
        if (found_keys.insert(detail::image_key(out)).second) found.push_back({n.run, std::move(out)});
      }
      if (len == max_len) continue;
      for (std::size_t li = 0; li < sst.alphabet().size(); ++li)
        for (TransId t : sst.outgoing(at, li)) {
          if (next.size() >= kFrontierCap) break;
          Update u = compose_updates(n.update, sst.transition(t).update);
          if (!seen.insert({sst.transition(t).target, detail::update_key(u)}).second) continue;
          Run r = n.run;
          r.steps.push_back(t);
          next.push_back({std::move(r), std::move(u)});
        }
    }
    if (found.size() >= limit) break;
    frontier = std::move(next);
  }
  return found;
}

struct Station {
  StateId q1 = 0;
  StateId q2 = 0;
  std::vector<Access> access;
  std::vector<Exit> exit;
};

struct Candidate {
  const Station* station = nullptr;
  const PhaseItem* enter = nullptr;
  const PhaseItem* loop = nullptr;
  const PhaseItem* leave = nullptr;
};

/// comp[track][x - 1] for x in {1, 2}.
using ComponentUpdates = std::array<std::array<Update, 2>, 3>;

ComponentUpdates component_updates(const Candidate& c) {
  ComponentUpdates comp;
  for (int i = 0; i < 3; ++i) {
    const Update once = compose_updates(c.enter->updates[i], c.loop->updates[i]);
    comp[i][0] = compose_updates(once, c.leave->updates[i]);
    comp[i][1] = compose_updates(compose_updates(once, c.loop->updates[i]), c.leave->updates[i]);
  }
  return comp;
}

/// Component used at position `pos` when the mark sits at `mark`.
constexpr int track_at(int pos, int mark) { return pos < mark ? 0 : pos == mark ? 1 : 2; }

/// Depth-first over (n1..n5) in {1,2}^5, lexicographically, tracking the
/// valuations of the W-runs marked at the second and fourth position.
bool diverges(const ComponentUpdates& comp, const Valuation& mid, const Valuation& right, int pos,
              const Image& output, DivergenceTuple& n) {
  if (pos == 5) return evaluate(output, mid) != evaluate(output, right);
  for (std::size_t x = 1; x <= 2; ++x) {
    n[pos] = x;
    const Valuation a = sst::apply(comp[track_at(pos, 1)][x - 1], mid);
    const Valuation b = sst::apply(comp[track_at(pos, 3)][x - 1], right);
    if (diverges(comp, a, b, pos + 1, output, n)) return true;
  }
  return false;
}

WPattern make_pattern(const Candidate& c, const Access& a, const Exit& e) {
  WPattern p;
  p.q1 = c.station->q1;
  p.q2 = c.station->q2;
  p.r = c.enter->end;
  p.access = a.run;
  p.exit = e.run;
  for (int i = 0; i < 3; ++i) {
    p.components[i] = {c.enter->runs[i], c.loop->runs[i], c.leave->runs[i]};
  }
  return p;
}

bool degenerate(const Candidate& c) {
  for (const PhaseItem* item : {c.enter, c.loop, c.leave}) {
    if (!(item->runs[0].steps == item->runs[1].steps && item->runs[1].steps == item->runs[2].steps))
      return false;
  }
  return true;
}

}  // namespace

WSearchResult find_divergent_wpattern(const Sst& sst, const WSearchOptions& options) {
  WSearchResult result;
  const auto acc = detail::accessible_states(sst);
  const auto coacc = detail::coaccessible_states(sst);
  const auto reach = detail::reachability(sst);
  const std::size_t clen = options.component_len;
  const std::size_t path_len = sst.num_states() + clen;

  std::vector<Station> stations;
  for (StateId q1 = 0; q1 < sst.num_states(); ++q1) {
    if (!acc[q1] || !coacc[q1]) continue;
    auto access = access_runs(sst, q1, path_len, options.max_access);
    if (access.empty()) continue;
    for (StateId q2 = 0; q2 < sst.num_states(); ++q2) {
      if (!coacc[q2] || !reach[q1][q2]) continue;
      auto exits = exit_runs(sst, q2, path_len, options.max_access);
      if (exits.empty()) continue;
      stations.push_back({q1, q2, access, std::move(exits)});
    }
  }

  PhaseTables tables(sst, options.max_table_nodes);
  try {
    for (std::size_t T = 1; T <= 3 * clen; ++T) {
      std::vector<Candidate> candidates;
      for (const Station& st : stations) {
        const Triple from{st.q1, st.q1, st.q2};
        const Triple to{st.q1, st.q2, st.q2};
        for (std::size_t l1 = 0; l1 <= std::min(clen, T - 1); ++l1) {
          for (std::size_t l2 = 1; l2 <= std::min(clen, T - l1); ++l2) {
            const std::size_t l3 = T - l1 - l2;
            if (l3 > clen) continue;
            for (const PhaseItem& enter : tables.get(from, l1)) {
              const Triple& r = enter.end;
              if (!reach[r[0]][to[0]] || !reach[r[1]][to[1]] || !reach[r[2]][to[2]]) continue;
              for (const PhaseItem& loop : tables.get(r, l2)) {
                if (loop.end != r) continue;
                if (!std::ranges::all_of(loop.skeletons, is_idempotent)) continue;
                std::array<Skeleton, 3> head;
                for (int i = 0; i < 3; ++i) head[i] = compose(enter.skeletons[i], loop.skeletons[i]);
                for (const PhaseItem& leave : tables.get(r, l3)) {
                  if (leave.end != to) continue;
                  bool loops = true;
                  for (int i = 0; i < 3 && loops; ++i)
                    loops = is_idempotent(compose(head[i], leave.skeletons[i]));
                  if (!loops) continue;
                  Candidate c{&st, &enter, &loop, &leave};
                  if (degenerate(c)) continue;
                  if (result.candidates + candidates.size() >= options.max_candidates) {
                    result.budget_exhausted = true;
                    break;
                  }
                  candidates.push_back(c);
                }
                if (result.budget_exhausted) break;
              }
              if (result.budget_exhausted) break;
            }
            if (result.budget_exhausted) break;
          }
          if (result.budget_exhausted) break;
        }
        if (result.budget_exhausted) break;
      }

      std::vector<std::optional<std::pair<WPattern, DivergenceTuple>>> hits(candidates.size());
      const auto first = find_first(
          candidates.size(),
          [&](std::size_t i) {
            const Candidate& c = candidates[i];
            const ComponentUpdates comp = component_updates(c);
            for (const Access& a : c.station->access)
              for (const Exit& e : c.station->exit) {
                DivergenceTuple n{};
                if (!diverges(comp, a.values, a.values, 0, e.output, n)) continue;
                WPattern p = make_pattern(c, a, e);
                if (wpattern_violation(sst, p)) continue;
                if (auto tuple = is_simply_divergent(sst, p)) {
                  hits[i] = std::pair{std::move(p), *tuple};
                  return true;
                }
              }
            return false;
          },
          options.exec);
      result.candidates += candidates.size();
      result.table_nodes = tables.nodes();
      if (first) {
        result.pattern = std::move(hits[*first]->first);
        result.tuple = hits[*first]->second;
        return result;
      }
      if (result.budget_exhausted) return result;
      result.max_total_len = T;
    }
  } catch (const BudgetHit&) {
    result.budget_exhausted = true;
    result.table_nodes = tables.nodes();
  }
  return result;
}

}  // namespace sst
