#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sst/analysis.hpp"
#include "sst/oracle.hpp"
#include "sst/parse.hpp"

using namespace sst;

namespace {

/// Single-state pattern on the keep-or-drop machine: the left and right
/// loops drop the letter (t2), the middle loop keeps it (t1).
WPattern amb_pattern() {
  WPattern p;
  p.q1 = p.q2 = 0;
  p.r = {0, 0, 0};
  p.access = p.exit = Run{0, {}};
  const Run empty{0, {}};
  p.components[0] = {empty, Run{0, {1}}, empty};
  p.components[1] = {empty, Run{0, {0}}, empty};
  p.components[2] = {empty, Run{0, {1}}, empty};
  return p;
}

ValuednessOptions quick() {
  ValuednessOptions o;
  o.search.component_len = 2;
  o.search.max_candidates = 20'000;
  o.oracle_max_len = 4;
  return o;
}

}  // namespace

TEST_CASE("dumbbells: exact decision on the fixtures") {
  CHECK(is_finite_ambiguous(oracle::fixture("id.sst")));
  CHECK(is_finite_ambiguous(oracle::fixture("id_dead.sst")));
  for (const char* name : {"amb.sst", "tsc.sst", "tsc1.sst", "r2.sst"}) {
    const Sst s = oracle::fixture(name);
    const auto d = find_dumbbell(s);
    REQUIRE_MESSAGE(d.has_value(), name);
    CHECK_MESSAGE(!dumbbell_violation(s, *d), name);
    CHECK_FALSE(is_finite_ambiguous(s));
  }
}

TEST_CASE("dumbbells: keep-or-drop machine") {
  const Sst amb = oracle::fixture("amb.sst");
  const auto d = find_dumbbell(amb);
  REQUIRE(d.has_value());
  CHECK(d->q1 == 0);
  CHECK(d->q2 == 0);
  CHECK(d->left_loop.size() == 1);
  std::set<std::vector<TransId>> distinct{d->left_loop.steps, d->bridge.steps, d->right_loop.steps};
  CHECK(distinct.size() >= 2);
}

TEST_CASE("dumbbell checker rejects broken witnesses") {
  const Sst amb = oracle::fixture("amb.sst");
  Dumbbell d = *find_dumbbell(amb);
  Dumbbell same = d;
  same.bridge = same.left_loop;
  same.right_loop = same.left_loop;
  CHECK(dumbbell_violation(amb, same).has_value());
  Dumbbell longer = d;
  longer.bridge.steps.push_back(0);
  CHECK(dumbbell_violation(amb, longer).has_value());

  SstDefinition def;
  def.alphabet = "a";
  def.variables = {"X1", "X2"};
  def.states = {"q"};
  def.initial = {0};
  def.final_output = {Image{Sym::var(0), Sym::var(1)}};
  def.transitions = {{0, 'a', Update{{{Sym::var(1)}, {Sym::var(0)}}}, 0},
                     {0, 'a', Update{{{Sym::var(0)}, {Sym::var(1)}}}, 0}};
  const Sst swap(def);
  const Dumbbell bad{0, 0, Run{0, {}}, Run{0, {0}}, Run{0, {1}}, Run{0, {0}}, Run{0, {}}};
  CHECK(dumbbell_violation(swap, bad).has_value());  // swap loop is not idempotent
  const auto found = find_dumbbell(swap);
  REQUIRE(found.has_value());
  CHECK(!dumbbell_violation(swap, *found));
}

TEST_CASE("dumbbell search agrees with explicit run triples") {
  oracle::Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    const Sst s = oracle::random_sst(rng, 3, 2);
    const auto d = find_dumbbell(s);
    const bool brute = oracle::has_dumbbell(s, 4);
    if (brute) CHECK(d.has_value());
    if (d) {
      CHECK(!dumbbell_violation(s, *d));
      if (d->left_loop.size() <= 4) CHECK(brute);
    }
  }
}

TEST_CASE("build_wrun on the keep-or-drop pattern") {
  const Sst amb = oracle::fixture("amb.sst");
  const WPattern p = amb_pattern();
  CHECK(!wpattern_violation(amb, p));
  const Run r = build_wrun(amb, p, {{1, 2, 1}, 1});
  CHECK(input_of(amb, r) == "aaaa");
  CHECK(eval_run(amb, r).word == "aa");
  const Run s = build_wrun(amb, p, {{2, 1, 1}, 1});
  CHECK(input_of(amb, s) == "aaaa");
  CHECK(eval_run(amb, s).word == "a");
  CHECK_THROWS_AS(build_wrun(amb, p, {{1, 1}, 2}), Error);
  CHECK_THROWS_AS(build_wrun(amb, p, {{1, 0}, 0}), Error);
}

TEST_CASE("W-run inputs do not depend on the mark") {
  const Sst amb = oracle::fixture("amb.sst");
  const WPattern p = amb_pattern();
  oracle::Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::size_t> values(oracle::pick(rng, 1, 6));
    for (auto& v : values) v = oracle::pick(rng, 1, 3);
    const Word u = input_of(amb, build_wrun(amb, p, {values, 0}));
    for (std::size_t m = 1; m < values.size(); ++m)
      CHECK(input_of(amb, build_wrun(amb, p, {values, m})) == u);
  }
}

TEST_CASE("simple divergence") {
  const Sst amb = oracle::fixture("amb.sst");
  const auto t = is_simply_divergent(amb, amb_pattern());
  REQUIRE(t.has_value());
  CHECK(*t == DivergenceTuple{1, 1, 1, 2, 1});

  WPattern flat = amb_pattern();
  flat.components[1] = flat.components[0];
  CHECK_FALSE(is_simply_divergent(amb, flat).has_value());
}

TEST_CASE("wpattern checker") {
  const Sst amb = oracle::fixture("amb.sst");
  WPattern p = amb_pattern();
  p.components[1].loop = Run{0, {0, 0}};
  CHECK(wpattern_violation(amb, p).has_value());  // loops read different words

  SstDefinition def;
  def.alphabet = "a";
  def.variables = {"X1", "X2"};
  def.states = {"q"};
  def.initial = {0};
  def.final_output = {Image{Sym::var(0), Sym::var(1)}};
  def.transitions = {{0, 'a', Update{{{Sym::var(1)}, {Sym::var(0)}}}, 0}};
  const Sst swap(def);
  WPattern w;
  const Run empty{0, {}};
  for (auto& c : w.components) c = {empty, Run{0, {0}}, empty};
  w.access = w.exit = empty;
  CHECK(wpattern_violation(swap, w).has_value());  // the swap is not a loop
}

TEST_CASE("W-pattern search finds verified witnesses") {
  for (const char* name : {"amb.sst", "tsc1.sst"}) {
    const Sst s = oracle::fixture(name);
    for (Exec exec : {Exec::Serial, Exec::Parallel}) {
      WSearchOptions o;
      o.exec = exec;
      const auto r = find_divergent_wpattern(s, o);
      REQUIRE_MESSAGE(r.pattern.has_value(), name);
      CHECK(!wpattern_violation(s, *r.pattern));
      CHECK(is_simply_divergent(s, *r.pattern) == r.tuple);
    }
  }
}

TEST_CASE("W-pattern search is deterministic across kernels") {
  for (const char* name : {"amb.sst", "tsc1.sst"}) {
    const Sst s = oracle::fixture(name);
    WSearchOptions a;
    a.exec = Exec::Serial;
    WSearchOptions b;
    b.exec = Exec::Parallel;
    const auto x = find_divergent_wpattern(s, a);
    const auto y = find_divergent_wpattern(s, b);
    REQUIRE(x.pattern.has_value());
    REQUIRE(y.pattern.has_value());
    CHECK(build_wrun(s, *x.pattern, {{1, 1, 1}, 1}) == build_wrun(s, *y.pattern, {{1, 1, 1}, 1}));
    CHECK(x.tuple == y.tuple);
  }
}

TEST_CASE("W-pattern search stays silent on finite-valued machines") {
  for (const char* name : {"id.sst", "tsc.sst", "r2.sst"}) {
    WSearchOptions o;
    o.component_len = 2;
    o.max_candidates = 20'000;
    const auto r = find_divergent_wpattern(oracle::fixture(name), o);
    CHECK_MESSAGE(!r.pattern.has_value(), name);
  }
}

TEST_CASE("analyze_valuedness ladder") {
  const auto id = analyze_valuedness(oracle::fixture("id.sst"), quick());
  CHECK(id.kind == Verdict::Kind::Finite);
  CHECK_FALSE(id.dumbbell.has_value());

  const Sst tsc1 = oracle::fixture("tsc1.sst");
  const auto inf = analyze_valuedness(tsc1, quick());
  CHECK(inf.kind == Verdict::Kind::Infinite);
  REQUIRE(inf.divergence.has_value());
  const auto& d = *inf.divergence;
  CHECK(d.mid_output != d.right_output);
  const auto outs = outputs(tsc1, d.input);
  CHECK(std::ranges::find(outs, d.mid_output) != outs.end());
  CHECK(std::ranges::find(outs, d.right_output) != outs.end());

  const auto tsc = analyze_valuedness(oracle::fixture("tsc.sst"), quick());
  CHECK(tsc.kind == Verdict::Kind::Unknown);
  REQUIRE(tsc.oracle.has_value());
  CHECK(tsc.oracle->maximum == 2);
  CHECK(std::string(to_string(tsc.kind)) == "Unknown");
}

TEST_CASE("verdicts agree with oracle growth on the fixtures") {
  for (const char* name : {"id.sst", "amb.sst", "tsc.sst", "tsc1.sst", "r2.sst"}) {
    const Sst s = oracle::fixture(name);
    const auto v = analyze_valuedness(s, quick());
    const auto r2 = valuedness_oracle(s, 2).maximum;
    const auto r4 = valuedness_oracle(s, 4).maximum;
    const auto r6 = valuedness_oracle(s, 6).maximum;
    const bool growing = r2 < r4 && r4 < r6;
    if (v.kind == Verdict::Kind::Finite) CHECK_MESSAGE(!growing, name);
    if (v.kind == Verdict::Kind::Infinite) CHECK_MESSAGE(growing, name);
  }
}

TEST_CASE("budget exhaustion folds into Unknown") {
  ValuednessOptions o = quick();
  o.search.max_candidates = 1;
  const auto v = analyze_valuedness(oracle::fixture("tsc.sst"), o);
  CHECK(v.kind == Verdict::Kind::Unknown);
  CHECK(v.search.budget_exhausted);

  ValuednessOptions tiny = quick();
  tiny.dumbbell.node_budget = 1;
  const Sst cycle = parse_sst(
      "alphabet: a\nvars: X1\nstates: p q\ninitial: p\nfinal p -> X1\n"
      "trans p a q { X1 := a }\ntrans q a p { X1 := X1 a }\n");
  CHECK(analyze_valuedness(cycle).kind == Verdict::Kind::Finite);
  const auto w = analyze_valuedness(cycle, tiny);
  CHECK(w.kind == Verdict::Kind::Unknown);
  CHECK(w.note.find("dumbbell search") != std::string::npos);
}

TEST_CASE("amplification") {
  const Sst amb = oracle::fixture("amb.sst");
  const auto p = amb_pattern();
  const auto a = amplify_valuedness(amb, p, {1, 1, 1, 2, 1}, 3);
  REQUIRE(a.has_value());
  CHECK(a->outputs.size() == 3);
  CHECK(std::set<Word>(a->outputs.begin(), a->outputs.end()).size() == 3);
  const auto outs = outputs(amb, a->input);
  for (std::size_t i = 0; i < a->runs.size(); ++i) {
    CHECK(input_of(amb, a->runs[i]) == a->input);
    CHECK(eval_run(amb, a->runs[i]).word == a->outputs[i]);
    CHECK(std::ranges::find(outs, a->outputs[i]) != outs.end());
  }
  CHECK_THROWS_AS(amplify_valuedness(amb, p, {1, 1, 1, 1, 1}, 3), Error);

  const auto one = amplify_valuedness(amb, p, {1, 1, 1, 2, 1}, 1);
  REQUIRE(one.has_value());
  CHECK(one->outputs.size() == 1);

  const Sst tsc1 = oracle::fixture("tsc1.sst");
  const auto found = find_divergent_wpattern(tsc1);
  REQUIRE(found.pattern.has_value());
  for (std::size_t m = 2; m <= 5; ++m) {
    const auto b = amplify_valuedness(tsc1, *found.pattern, *found.tuple, m);
    REQUIRE(b.has_value());
    CHECK(b->outputs.size() == m);
    const auto all = outputs(tsc1, b->input);
    for (const auto& w : b->outputs) CHECK(std::ranges::find(all, w) != all.end());
  }
}
