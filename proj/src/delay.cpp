#include "sst/delay.hpp"

#include "sst/wordcomb.hpp"

namespace sst {

RunTrace trace_of(const Sst& sst, const Run& run) {
  return {input_of(sst, run), eval_run(sst, run)};
}

std::size_t weight(const RunTrace& run, std::size_t t, std::size_t j) {
  if (t > run.length())
    throw Error(ErrorCode::InvalidArgument, "step " + std::to_string(t) + " exceeds run length");
  if (j == 0 || j > run.output.word.size())
    throw Error(ErrorCode::InvalidArgument,
                "output position " + std::to_string(j) + " out of range");
  std::size_t count = 0;
  for (std::size_t k = 0; k < j; ++k)
    if (run.output.steps[k] <= t) ++count;
  return count;
}

DelayReport delay(const RunTrace& first, const RunTrace& second, std::size_t C) {
  if (first.input != second.input)
    throw Error(ErrorCode::InputMismatch, "delay requires runs on the same input");
  if (first.output.word != second.output.word)
    throw Error(ErrorCode::OutputMismatch, "delay requires runs with the same output");

  DelayReport report;
  report.C = C;
  report.cuts = cuts(first.output.word, C);
  const std::size_t n = first.length();
  report.first_weights.assign(n + 1, std::vector<std::size_t>(report.cuts.size()));
  report.second_weights = report.first_weights;
  for (std::size_t t = 0; t <= n; ++t) {
    for (std::size_t k = 0; k < report.cuts.size(); ++k) {
      const std::size_t a = weight(first, t, report.cuts[k]);
      const std::size_t b = weight(second, t, report.cuts[k]);
      report.first_weights[t][k] = a;
      report.second_weights[t][k] = b;
      const std::size_t diff = a > b ? a - b : b - a;
      if (!report.argmax || diff > report.delay) {
        report.delay = diff;
        report.argmax = std::pair{t, report.cuts[k]};
      }
    }
  }
  return report;
}

DelayReport delay(const Sst& sst, const Run& first, const Run& second, std::size_t C) {
  return delay(trace_of(sst, first), trace_of(sst, second), C);
}

}  // namespace sst
