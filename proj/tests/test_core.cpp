#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sst/core.hpp"
#include "sst/parse.hpp"

using namespace sst;

namespace {

Image img(std::initializer_list<Sym> s) { return Image(s); }
constexpr Sym L(char c) { return Sym::letter(c); }
constexpr Sym V(VarId x) { return Sym::var(x); }

}  // namespace

TEST_CASE("compose: variable substituted into the second update") {
  // a = {X1 := X1 a ; X2 := X2}, b = {X1 := X2 X1 ; X2 := e}
  Update a{{img({V(0), L('a')}), img({V(1)})}};
  Update b{{img({V(1), V(0)}), img({})}};
  Update expected{{img({V(1), V(0), L('a')}), img({})}};
  CHECK(compose_updates(a, b) == expected);
}

TEST_CASE("compose: self composition by hand substitution") {
  Update a{{img({L('a'), V(0), L('b'), V(1), L('c')}), img({L('a')})}};
  Update expected{{img({L('a'), L('a'), V(0), L('b'), V(1), L('c'), L('b'), L('a'), L('c')}),
                   img({L('a')})}};
  CHECK(compose_updates(a, a) == expected);
}

TEST_CASE("compose: identities are neutral") {
  oracle::Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Update u = oracle::random_update(rng, 3, "ab", 5);
    CHECK(compose_updates(Update::identity(3), u) == u);
    CHECK(compose_updates(u, Update::identity(3)) == u);
  }
}

TEST_CASE("compose: sequential application, copyless closure, associativity") {
  oracle::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = oracle::pick(rng, 1, 3);
    const Update a = oracle::random_update(rng, n, "ab", 5);
    const Update b = oracle::random_update(rng, n, "ab", 5);
    const Update c = oracle::random_update(rng, n, "ab", 5);
    Valuation v(n);
    for (auto& w : v) w = oracle::random_word(rng, "ab", 3);
    REQUIRE(is_copyless(a));
    CHECK(sst::apply(compose_updates(a, b), v) == sst::apply(b, sst::apply(a, v)));
    CHECK(is_copyless(compose_updates(a, b)));
    CHECK(compose_updates(compose_updates(a, b), c) == compose_updates(a, compose_updates(b, c)));
  }
}

TEST_CASE("compose: mismatched variable counts") {
  CHECK_THROWS_AS(compose_updates(Update::identity(1), Update::identity(2)), Error);
}

TEST_CASE("power agrees with repeated application") {
  Update u{{img({V(0), L('a'), V(1)}), img({L('b')})}};
  Valuation v{"x", "y"};
  Valuation w = v;
  for (std::size_t n = 0; n <= 4; ++n) {
    CHECK(sst::apply(power(u, n), v) == w);
    w = sst::apply(u, w);
  }
}

TEST_CASE("parse: fixtures load and round-trip") {
  for (const char* name : {"id.sst", "id_dead.sst", "amb.sst", "tsc.sst", "tsc1.sst", "r2.sst"}) {
    const Sst a = oracle::fixture(name);
    const Sst b = parse_sst(format_sst(a));
    CHECK(a.definition().transitions == b.definition().transitions);
    CHECK(a.definition().final_output == b.definition().final_output);
    CHECK(format_sst(b) == format_sst(a));
  }
}

TEST_CASE("parse: copyless violation names the variable and position") {
  try {
    oracle::fixture("bad_copy.sst");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::CopylessViolation);
    CHECK(e.line() == 6);
    CHECK(std::string(e.what()).find("X1") != std::string::npos);
  }
}

TEST_CASE("parse: implicit keep counts as a use") {
  const char* text =
      "alphabet: a\nvars: X1 X2\nstates: q\ninitial: q\nfinal q -> X1\n"
      "trans q a q { X1 := X1 X2 }\n";
  CHECK_THROWS_AS(parse_sst(text), ParseError);
}

TEST_CASE("parse: unknown symbols and order") {
  const std::string head = "alphabet: a\nvars: X1\nstates: q\ninitial: q\nfinal q -> X1\n";
  CHECK_THROWS_AS(parse_sst(head + "trans q b q { X1 := X1 }\n"), ParseError);
  CHECK_THROWS_AS(parse_sst(head + "trans q a p { X1 := X1 }\n"), ParseError);
  CHECK_THROWS_AS(parse_sst(head + "trans q a q { X1 := X1 Y }\n"), ParseError);
  CHECK_THROWS_AS(parse_sst("vars: X1\nalphabet: a\n"), ParseError);
  try {
    parse_sst(head + "trans q a q { Z := a }\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::UnknownSymbol);
    CHECK(e.line() == 6);
  }
}

TEST_CASE("eval_run: provenance tags") {
  const Sst id = oracle::fixture("id.sst");
  const auto runs = enumerate_runs(id, "aa");
  REQUIRE(runs.size() == 1);
  const auto out = eval_run(id, runs[0]);
  CHECK(out.word == "aa");
  CHECK(out.steps == std::vector<std::uint32_t>{1, 2});

  const Sst tsc1 = oracle::fixture("tsc1.sst");
  // init letters carry step 0
  const auto zero = eval_run(tsc1, Run{0, {}});
  CHECK(zero.word == "1");
  CHECK(zero.steps == std::vector<std::uint32_t>{0});
}

TEST_CASE("eval_run: TSC examples") {
  const Sst tsc = oracle::fixture("tsc.sst");
  // all-append transitions at qA: 0 append is t1, 1 append is t3
  CHECK(eval_run(tsc, Run{0, {1, 3}}).word == "01");

  const Sst tsc1 = oracle::fixture("tsc1.sst");
  CHECK(eval_run(tsc1, Run{0, {0}}).word == "01");
  CHECK(eval_run(tsc1, Run{0, {1}}).word == "10");
}

TEST_CASE("eval_run: final constants get the last step") {
  const Sst dead = oracle::fixture("id_dead.sst");
  const StateId d = *dead.state_index("dead");
  SstDefinition def = dead.definition();
  def.initial.push_back(d);
  const Sst s(def);
  TransId loop = 0;
  for (TransId t = 0; t < s.num_transitions(); ++t)
    if (s.transition(t).source == d) loop = t;
  const auto out = eval_run(s, Run{d, {loop, loop}});
  CHECK(out.word == "aaa");
  CHECK(out.steps == std::vector<std::uint32_t>{2, 1, 2});
}

TEST_CASE("eval_run: rejects broken or non-accepting runs") {
  const Sst r2 = oracle::fixture("r2.sst");
  CHECK_THROWS_AS(eval_run(r2, Run{0, {0}}), Error);      // ends in s1
  CHECK_THROWS_AS(end_state(r2, Run{0, {0, 0}}), Error);  // t0 leaves s0 only
}

TEST_CASE("enumerate_runs: counts and order") {
  CHECK(enumerate_runs(oracle::fixture("id.sst"), "aa").size() == 1);
  const Sst amb = oracle::fixture("amb.sst");
  const auto runs = enumerate_runs(amb, "aaa");
  CHECK(runs.size() == 8);
  CHECK(runs.front().steps == std::vector<TransId>{0, 0, 0});
  CHECK(runs.back().steps == std::vector<TransId>{1, 1, 1});
  CHECK(enumerate_runs(oracle::fixture("tsc.sst"), "").size() == 2);
  CHECK(count_accepting_runs(amb, "aaaa") == 16);
}

TEST_CASE("outputs: examples") {
  using V = std::vector<Word>;
  CHECK(outputs(oracle::fixture("r2.sst"), "001011") == V{"00", "10", "11"});
  CHECK(outputs(oracle::fixture("tsc.sst"), "01") == V{"01", "10"});
  CHECK(outputs(oracle::fixture("tsc1.sst"), "00") == V{"001", "010", "100"});
}

TEST_CASE("evaluation routes agree on every enumerated run") {
  for (const char* name : {"id.sst", "amb.sst", "tsc.sst", "tsc1.sst", "r2.sst"}) {
    const Sst s = oracle::fixture(name);
    for (std::size_t n = 0; n <= 4; ++n)
      for (const auto& u : oracle::words_of_length(s.alphabet(), n)) {
        const auto runs = enumerate_runs(s, u);
        for (const auto& r : runs) CHECK(eval_run(s, r).word == output_via_composition(s, r));
        const auto outs = outputs(s, u);
        CHECK(outs == outputs_by_runs(s, u));
        CHECK(outs.size() <= runs.size());
        CHECK(count_accepting_runs(s, u) == runs.size());
      }
  }
}

TEST_CASE("evaluation routes agree on random machines") {
  oracle::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const Sst s = oracle::random_sst(rng, 3, 3);
    const Run r = oracle::random_run(rng, s, oracle::pick(rng, 0, 6));
    CHECK(eval_run(s, r).word == output_via_composition(s, r));
  }
}

TEST_CASE("enumeration budget fails loudly") {
  CHECK_THROWS_AS(enumerate_runs(oracle::fixture("amb.sst"), "aaaaaaaaaa", 100), Error);
}
