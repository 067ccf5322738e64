#pragma once

// Brute-force reference implementations and random generators for tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sst/core.hpp"
#include "sst/parse.hpp"
#include "sst/skeleton.hpp"
#include "sst/wordcomb.hpp"

namespace oracle {

using namespace sst;

inline Sst fixture(const std::string& name) { return load_sst(std::string(FIXTURE_DIR) + "/" + name); }

/// Tries every divisor length d of |w|, smallest first.
inline Word primitive_root(const Word& w) {
  for (std::size_t d = 1; d <= w.size(); ++d) {
    if (w.size() % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < w.size() && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return w.substr(0, d);
  }
  return w;
}

/// Cuts straight from the definition: the largest j after the previous cut
/// such that the factor has a short primitive root.
inline std::vector<std::size_t> cuts(const Word& w, std::size_t C) {
  std::vector<std::size_t> out;
  std::size_t prev = 0;
  while (prev < w.size()) {
    std::size_t best = 0;
    for (std::size_t j = prev + 1; j <= w.size(); ++j)
      if (primitive_root(w.substr(prev, j - prev)).size() <= C) best = j;
    out.push_back(best);
    prev = best;
  }
  return out;
}

inline std::size_t weight(const std::vector<std::uint32_t>& steps, std::size_t t, std::size_t j) {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(j),
                    [t](std::uint32_t s) { return s <= t; }));
}

/// Every word of length exactly n over the alphabet, in lexicographic order.
inline std::vector<Word> words_of_length(const std::string& alphabet, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (char c : alphabet) next.push_back(w + c);
    out = std::move(next);
  }
  return out;
}

/// Maximum number of distinct outputs over 1 <= |u| <= max_len.
inline std::size_t max_outputs(const Sst& sst, std::size_t max_len) {
  std::size_t best = 0;
  for (std::size_t n = 1; n <= max_len; ++n)
    for (const auto& u : words_of_length(sst.alphabet(), n))
      best = std::max(best, outputs_by_runs(sst, u).size());
  return best;
}

// ---------------------------------------------------------------------------
// Random generators

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Word random_word(Rng& rng, const std::string& alphabet, std::size_t max_len) {
  Word w;
  const std::size_t n = pick(rng, 0, max_len);
  for (std::size_t i = 0; i < n; ++i) w.push_back(alphabet[pick(rng, 0, alphabet.size() - 1)]);
  return w;
}

/// Copyless update: every variable lands in at most one image, at a random
/// place, with random letters sprinkled in. Images stay within max_image.
inline Update random_update(Rng& rng, std::size_t num_vars, const std::string& alphabet,
                            std::size_t max_image) {
  Update u;
  u.images.assign(num_vars, {});
  std::vector<VarId> vars(num_vars);
  for (VarId x = 0; x < num_vars; ++x) vars[x] = x;
  std::shuffle(vars.begin(), vars.end(), rng);
  const std::size_t used = pick(rng, 0, num_vars);
  for (std::size_t i = 0; i < used; ++i) {
    auto& image = u.images[pick(rng, 0, num_vars - 1)];
    if (image.size() < max_image) image.push_back(Sym::var(vars[i]));
  }
  for (auto& image : u.images) {
    const std::size_t room = max_image - image.size();
    const std::size_t letters = pick(rng, 0, room);
    for (std::size_t k = 0; k < letters; ++k) {
      const std::size_t at = pick(rng, 0, image.size());
      image.insert(image.begin() + static_cast<std::ptrdiff_t>(at),
                   Sym::letter(alphabet[pick(rng, 0, alphabet.size() - 1)]));
    }
  }
  return u;
}

/// Random copyless SST over {a, b} in which every state is initial and final,
/// so any transition sequence that chains is an accepting run.
inline Sst random_sst(Rng& rng, std::size_t max_states, std::size_t max_vars) {
  SstDefinition def;
  def.alphabet = "ab";
  const std::size_t nv = pick(rng, 1, max_vars);
  const std::size_t ns = pick(rng, 1, max_states);
  for (std::size_t x = 0; x < nv; ++x) def.variables.push_back("X" + std::to_string(x + 1));
  for (std::size_t q = 0; q < ns; ++q) {
    def.states.push_back("q" + std::to_string(q));
    def.initial.push_back(static_cast<StateId>(q));
  }
  def.initial_assignment.assign(nv, Word{});
  for (auto& w : def.initial_assignment) w = random_word(rng, "ab", 1);
  for (std::size_t q = 0; q < ns; ++q) {
    Image out;
    std::vector<VarId> vars(nv);
    for (VarId x = 0; x < nv; ++x) vars[x] = x;
    std::shuffle(vars.begin(), vars.end(), rng);
    for (VarId x : vars)
      if (pick(rng, 0, 3) != 0) out.push_back(Sym::var(x));
    if (pick(rng, 0, 1)) out.push_back(Sym::letter('b'));
    def.final_output.push_back(out);
  }
  for (std::size_t q = 0; q < ns; ++q)
    for (char c : def.alphabet) {
      const std::size_t k = pick(rng, 1, 2);
      for (std::size_t i = 0; i < k; ++i)
        def.transitions.push_back({static_cast<StateId>(q), c, random_update(rng, nv, "ab", 4),
                                   static_cast<StateId>(pick(rng, 0, ns - 1))});
    }
  return Sst(std::move(def));
}

/// Random walk of the given length from a random state.
inline Run random_run(Rng& rng, const Sst& sst, std::size_t length) {
  Run run{static_cast<StateId>(pick(rng, 0, sst.num_states() - 1)), {}};
  StateId at = run.start;
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<TransId> out;
    for (TransId t = 0; t < sst.num_transitions(); ++t)
      if (sst.transition(t).source == at) out.push_back(t);
    const TransId t = out[pick(rng, 0, out.size() - 1)];
    run.steps.push_back(t);
    at = sst.transition(t).target;
  }
  return run;
}

inline ParamWord random_param_word(Rng& rng, const std::string& alphabet, std::size_t factors) {
  ParamWord p = ParamWord::constant(random_word(rng, alphabet, 3));
  for (std::size_t i = 0; i < factors; ++i) {
    Word base;
    while (base.empty()) base = random_word(rng, alphabet, 3);
    p.append_factor(base, 0);
    p.append(random_word(rng, alphabet, 3));
  }
  return p;
}

}  // namespace oracle

namespace oracle {

/// Runs from p to q on v, in no particular order.
inline std::vector<Run> runs_between(const Sst& sst, StateId p, StateId q, const Word& v) {
  std::vector<Run> out;
  std::vector<Run> cur{Run{p, {}}};
  for (char c : v) {
    std::vector<Run> next;
    for (const auto& r : cur) {
      const StateId at = end_state(sst, r);
      for (TransId t = 0; t < sst.num_transitions(); ++t)
        if (sst.transition(t).source == at && sst.transition(t).letter == c) {
          Run n = r;
          n.steps.push_back(t);
          next.push_back(std::move(n));
        }
    }
    cur = std::move(next);
  }
  for (auto& r : cur)
    if (end_state(sst, r) == q) out.push_back(std::move(r));
  return out;
}

/// Looks for a dumbbell whose loop word has length at most max_len by
/// trying every triple of explicit runs.
inline bool has_dumbbell(const Sst& sst, std::size_t max_len) {
  const std::size_t n = sst.num_states();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (StateId q = 0; q < n; ++q) reach[q][q] = true;
  for (std::size_t round = 0; round < n; ++round)
    for (const auto& tr : sst.transitions())
      for (StateId p = 0; p < n; ++p)
        if (reach[p][tr.source]) reach[p][tr.target] = true;
  auto accessible = [&](StateId q) {
    for (StateId i = 0; i < n; ++i)
      if (sst.is_initial(i) && reach[i][q]) return true;
    return false;
  };
  auto coaccessible = [&](StateId q) {
    for (StateId f = 0; f < n; ++f)
      if (sst.is_final(f) && reach[q][f]) return true;
    return false;
  };
  for (std::size_t len = 1; len <= max_len; ++len)
    for (const auto& v : words_of_length(sst.alphabet(), len))
      for (StateId q1 = 0; q1 < n; ++q1) {
        if (!accessible(q1) || !coaccessible(q1)) continue;
        const auto left = runs_between(sst, q1, q1, v);
        for (StateId q2 = 0; q2 < n; ++q2) {
          if (!coaccessible(q2)) continue;
          const auto bridge = runs_between(sst, q1, q2, v);
          const auto right = runs_between(sst, q2, q2, v);
          for (const auto& a : left) {
            if (!is_idempotent(skeleton_of(induced_update(sst, a)))) continue;
            for (const auto& b : bridge)
              for (const auto& c : right) {
                if (!is_idempotent(skeleton_of(induced_update(sst, c)))) continue;
                if (a.steps != b.steps || b.steps != c.steps) return true;
              }
          }
        }
      }
  return false;
}

}  // namespace oracle
