#include "doctest.h"
#include "oracles.hpp"
#include "sst/delay.hpp"

using namespace sst;

namespace {

// Output abcccbb over an input of length 2. The first run writes abc..bb in
// its first step, the second run writes ...c.bb in its first step.
RunTrace first_run() { return {"xy", {"abcccbb", {1, 1, 1, 2, 2, 1, 1}}}; }
RunTrace second_run() { return {"xy", {"abcccbb", {2, 2, 2, 1, 2, 1, 1}}}; }

}  // namespace

TEST_CASE("weights of the worked example") {
  const RunTrace a = first_run();
  const RunTrace b = second_run();
  for (std::size_t j : {2, 5, 7}) {
    CHECK(weight(a, 0, j) == 0);
    CHECK(weight(b, 0, j) == 0);
    CHECK(weight(a, 2, j) == j);
    CHECK(weight(b, 2, j) == j);
  }
  CHECK(weight(a, 1, 2) == 2);
  CHECK(weight(a, 1, 5) == 3);
  CHECK(weight(a, 1, 7) == 5);
  CHECK(weight(b, 1, 2) == 0);
  CHECK(weight(b, 1, 5) == 1);
  CHECK(weight(b, 1, 7) == 3);
  CHECK_THROWS_AS(weight(a, 3, 2), Error);
  CHECK_THROWS_AS(weight(a, 1, 0), Error);
  CHECK_THROWS_AS(weight(a, 1, 8), Error);
}

TEST_CASE("delay of the worked example") {
  const auto r = delay(first_run(), second_run(), 2);
  CHECK(r.cuts == std::vector<std::size_t>{2, 5, 7});
  CHECK(r.delay == 2);
  REQUIRE(r.argmax.has_value());
  CHECK(*r.argmax == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(r.first_weights.size() == 3);
  CHECK(r.first_weights[1] == std::vector<std::size_t>{2, 3, 5});
  CHECK(r.second_weights[1] == std::vector<std::size_t>{0, 1, 3});
  CHECK(delay(first_run(), first_run(), 2).delay == 0);
}

TEST_CASE("delay preconditions") {
  RunTrace other = second_run();
  other.input = "xz";
  CHECK_THROWS_AS(delay(first_run(), other, 2), Error);
  other = second_run();
  other.output.word = "abcccba";
  CHECK_THROWS_AS(delay(first_run(), other, 2), Error);
  CHECK_THROWS_AS(delay(first_run(), second_run(), 0), Error);
}

TEST_CASE("delay on SST runs matches the definition") {
  for (const char* name : {"amb.sst", "tsc.sst", "tsc1.sst", "r2.sst"}) {
    const Sst s = oracle::fixture(name);
    for (std::size_t n = 1; n <= 4; ++n)
      for (const auto& u : oracle::words_of_length(s.alphabet(), n)) {
        const auto runs = enumerate_runs(s, u);
        for (std::size_t i = 0; i < runs.size(); ++i)
          for (std::size_t k = 0; k < runs.size(); ++k) {
            const auto a = eval_run(s, runs[i]);
            const auto b = eval_run(s, runs[k]);
            if (a.word != b.word) continue;
            for (std::size_t C = 1; C <= 2; ++C) {
              std::size_t expected = 0;
              for (std::size_t t = 0; t <= n; ++t)
                for (std::size_t j : oracle::cuts(a.word, C)) {
                  const std::size_t x = oracle::weight(a.steps, t, j);
                  const std::size_t y = oracle::weight(b.steps, t, j);
                  expected = std::max(expected, x > y ? x - y : y - x);
                }
              CHECK(delay(s, runs[i], runs[k], C).delay == expected);
            }
          }
      }
  }
}
