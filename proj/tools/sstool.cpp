// sstool: command-line front end for the SST analyses.
//
// Exit status: 0 success / Finite / equal, 1 Infinite / counterexample,
// 2 usage, input or budget errors (including Unknown verdicts).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sst/analysis.hpp"
#include "sst/decompose.hpp"
#include "sst/delay.hpp"
#include "sst/oracle.hpp"
#include "sst/parse.hpp"
#include "sst/skeleton.hpp"

using json = nlohmann::json;
using namespace sst;

namespace {

constexpr int kOk = 0;
constexpr int kVerdict = 1;
constexpr int kError = 2;

struct Options {
  bool as_json = false;
  std::size_t budget = kDefaultBudget;
  std::size_t max_len = 6;
  std::size_t C = 2;
  std::size_t D = 10;
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::string input;
  std::string runs;
  std::size_t component_len = 4;
  std::size_t max_candidates = 1'000'000;
  std::size_t amplify = 0;
  bool serial = false;
  bool cover = false;
  std::vector<std::string> files;
};

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::uint64_t fnv1a64(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string shown(const Word& w) { return w.empty() ? "ε" : w; }

json run_json(const Sst& sst, const Run& run) {
  return {{"start", sst.state_name(run.start)},
          {"transitions", run.steps},
          {"input", input_of(sst, run)},
          {"text", to_string(sst, run)}};
}

json dumbbell_json(const Sst& sst, const Dumbbell& d) {
  return {{"q1", sst.state_name(d.q1)},
          {"q2", sst.state_name(d.q2)},
          {"access", run_json(sst, d.access)},
          {"left_loop", run_json(sst, d.left_loop)},
          {"bridge", run_json(sst, d.bridge)},
          {"right_loop", run_json(sst, d.right_loop)},
          {"exit", run_json(sst, d.exit)}};
}

json pattern_json(const Sst& sst, const WPattern& p) {
  json comps = json::array();
  for (const auto& c : p.components)
    comps.push_back({{"enter", run_json(sst, c.enter)},
                     {"loop", run_json(sst, c.loop)},
                     {"leave", run_json(sst, c.leave)}});
  return {{"q1", sst.state_name(p.q1)},
          {"q2", sst.state_name(p.q2)},
          {"r", {sst.state_name(p.r[0]), sst.state_name(p.r[1]), sst.state_name(p.r[2])}},
          {"access", run_json(sst, p.access)},
          {"exit", run_json(sst, p.exit)},
          {"components", comps}};
}

json oracle_json(const OracleReading& r) {
  return {{"maximum", r.maximum}, {"witness", r.witness}, {"inputs_scanned", r.inputs_scanned}};
}

/// Everything a subcommand produces: a JSON result, text lines and the exit code.
struct Outcome {
  json result = json::object();
  std::vector<std::string> lines;
  int code = kOk;
};

void say(Outcome& o, std::string line) { o.lines.push_back(std::move(line)); }

Outcome cmd_validate(const Sst& sst, const Options&) {
  Outcome o;
  const auto monoid = skeleton_monoid(sst).size();
  o.result = {{"valid", true},
              {"states", sst.num_states()},
              {"variables", sst.num_vars()},
              {"transitions", sst.num_transitions()},
              {"alphabet", sst.alphabet()},
              {"skeleton_monoid_size", monoid}};
  say(o, "ok: " + std::to_string(sst.num_states()) + " states, " + std::to_string(sst.num_vars()) +
             " variables, " + std::to_string(sst.num_transitions()) + " transitions, skeleton monoid " +
             std::to_string(monoid));
  return o;
}

Outcome cmd_eval(const Sst& sst, const Options& opt) {
  Outcome o;
  const auto outs = outputs(sst, opt.input, opt.budget);
  o.result = {{"input", opt.input}, {"outputs", outs}, {"runs", count_accepting_runs(sst, opt.input)}};
  for (const auto& w : outs) say(o, shown(w));
  if (outs.empty()) say(o, "(no accepting run)");
  return o;
}

Outcome cmd_runs(const Sst& sst, const Options& opt) {
  Outcome o;
  json runs = json::array();
  std::size_t i = 0;
  for (const auto& r : enumerate_runs(sst, opt.input, opt.budget)) {
    const auto out = eval_run(sst, r);
    json j = run_json(sst, r);
    j["output"] = out.word;
    j["steps"] = out.steps;
    runs.push_back(j);
    say(o, "#" + std::to_string(i++) + "  " + to_string(sst, r) + "  => " + shown(out.word));
  }
  o.result = {{"input", opt.input}, {"runs", runs}};
  return o;
}

Outcome cmd_ambiguity(const Sst& sst, const Options& opt) {
  Outcome o;
  const auto d = find_dumbbell(sst);
  const auto reading = ambiguity_oracle(sst, opt.max_len, opt.budget,
                                        opt.serial ? Exec::Serial : Exec::Parallel);
  o.result["oracle"] = oracle_json(reading);
  o.result["finite_ambiguous"] = !d.has_value();
  if (d) {
    if (auto bad = dumbbell_violation(sst, *d))
      throw Error(ErrorCode::InvalidRun, "internal: dumbbell failed its check: " + *bad);
    o.result["dumbbell"] = dumbbell_json(sst, *d);
    o.code = kVerdict;
    say(o, "not finite-ambiguous: dumbbell at q1=" + sst.state_name(d->q1) +
               ", q2=" + sst.state_name(d->q2));
    say(o, "  access      " + to_string(sst, d->access));
    say(o, "  left loop   " + to_string(sst, d->left_loop));
    say(o, "  bridge      " + to_string(sst, d->bridge));
    say(o, "  right loop  " + to_string(sst, d->right_loop));
    say(o, "  exit        " + to_string(sst, d->exit));
  } else {
    say(o, "finite-ambiguous (no dumbbell)");
  }
  say(o, "most runs up to length " + std::to_string(opt.max_len) + ": " +
             std::to_string(reading.maximum) + " on " + shown(reading.witness));
  return o;
}

Outcome cmd_valuedness(const Sst& sst, const Options& opt) {
  Outcome o;
  ValuednessOptions vo;
  vo.search.component_len = opt.component_len;
  vo.search.max_candidates = opt.max_candidates;
  vo.search.exec = opt.serial ? Exec::Serial : Exec::Parallel;
  vo.oracle_max_len = opt.max_len;
  vo.oracle_budget = opt.budget;
  const Verdict v = analyze_valuedness(sst, vo);

  json evidence = json::object();
  say(o, std::string("verdict: ") + to_string(v.kind) + " (" + v.note + ")");
  if (v.dumbbell) evidence["dumbbell"] = dumbbell_json(sst, *v.dumbbell);
  if (v.divergence) {
    const auto& d = *v.divergence;
    evidence["pattern"] = pattern_json(sst, d.pattern);
    evidence["tuple"] = d.tuple;
    evidence["input"] = d.input;
    evidence["outputs"] = {d.mid_output, d.right_output};
    std::string t;
    for (auto x : d.tuple) t += (t.empty() ? "" : ",") + std::to_string(x);
    say(o, "  tuple (" + t + ") on input " + shown(d.input) + ": " + shown(d.mid_output) + " vs " +
               shown(d.right_output));
    if (opt.amplify > 0) {
      const auto a = amplify_valuedness(sst, d.pattern, d.tuple, opt.amplify);
      if (a) {
        evidence["amplification"] = {{"input", a->input}, {"outputs", a->outputs},
                                     {"sequence", a->sequence.values}, {"marks", a->marks}};
        say(o, "  " + std::to_string(a->outputs.size()) + " outputs on " + shown(a->input) + ":");
        for (const auto& w : a->outputs) say(o, "    " + shown(w));
      } else {
        evidence["amplification"] = nullptr;
        say(o, "  amplification: none within budget");
      }
    }
  }
  json search = {{"candidates", v.search.candidates},
                 {"table_nodes", v.search.table_nodes},
                 {"max_total_len", v.search.max_total_len},
                 {"budget_exhausted", v.search.budget_exhausted}};
  json readings = json::array();
  if (v.oracle) {
    readings.push_back(oracle_json(*v.oracle));
    say(o, "  oracle: at most " + std::to_string(v.oracle->maximum) + " outputs up to length " +
               std::to_string(opt.max_len) + " (max on " + shown(v.oracle->witness) + ")");
  }
  o.result = {{"kind", to_string(v.kind)},
              {"note", v.note},
              {"evidence", evidence},
              {"search", search},
              {"oracle_readings", readings}};
  o.code = v.kind == Verdict::Kind::Finite ? kOk : v.kind == Verdict::Kind::Infinite ? kVerdict : kError;
  return o;
}

Outcome cmd_delay(const Sst& sst, const Options& opt) {
  Outcome o;
  const auto runs = enumerate_runs(sst, opt.input, opt.budget);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (!opt.runs.empty()) {
    const auto comma = opt.runs.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--runs expects i,j");
    const std::size_t i = std::stoul(opt.runs.substr(0, comma));
    const std::size_t j = std::stoul(opt.runs.substr(comma + 1));
    if (i >= runs.size() || j >= runs.size())
      throw Error(ErrorCode::InvalidArgument, "run index out of range (" +
                                                  std::to_string(runs.size()) + " runs)");
    pairs.emplace_back(i, j);
  } else {
    for (std::size_t i = 0; i < runs.size(); ++i)
      for (std::size_t j = i + 1; j < runs.size(); ++j)
        if (eval_run(sst, runs[i]).word == eval_run(sst, runs[j]).word) pairs.emplace_back(i, j);
  }
  json table = json::array();
  for (auto [i, j] : pairs) {
    const auto r = delay(sst, runs[i], runs[j], opt.C);
    json row = {{"runs", {i, j}},
                {"output", eval_run(sst, runs[i]).word},
                {"cuts", r.cuts},
                {"first_weights", r.first_weights},
                {"second_weights", r.second_weights},
                {"delay", r.delay}};
    if (r.argmax) row["argmax"] = {{"t", r.argmax->first}, {"cut", r.argmax->second}};
    table.push_back(row);
    say(o, "runs #" + std::to_string(i) + " #" + std::to_string(j) + "  delay " +
               std::to_string(r.delay) + "  output " + shown(eval_run(sst, runs[i]).word));
  }
  if (pairs.empty()) say(o, "no pair of runs with equal output");
  o.result = {{"input", opt.input}, {"C", opt.C}, {"pairs", table}};
  return o;
}

Outcome cmd_decompose(const Sst& sst, const Options& opt) {
  Outcome o;
  const SelectorFamily f(sst, opt.k, opt.budget);
  json rows = json::array();
  for (std::size_t n = 0; n <= opt.max_len; ++n) {
    const WordSpace space(sst.alphabet(), n, n);
    for (std::size_t idx = 0; idx < space.size(); ++idx) {
      const Word u = space.at(idx);
      const auto row = f.row(u);
      const auto total = outputs(sst, u, opt.budget).size();
      bool any = false;
      json values = json::array();
      std::string line = shown(u) + ":";
      for (const auto& w : row) {
        values.push_back(w ? json(*w) : json(nullptr));
        line += "  " + (w ? shown(*w) : std::string("-"));
        any = any || w.has_value();
      }
      if (!any) continue;
      json entry = {{"input", u}, {"selectors", values}, {"outputs", total}};
      if (total > opt.k) line += "  (" + std::to_string(total) + " outputs, exceeds k)";
      if (opt.cover) {
        const auto cover = semantic_cover(sst, u, opt.C, opt.D, opt.budget);
        entry["cover_size"] = cover.size();
        line += "  cover " + std::to_string(cover.size());
      }
      rows.push_back(entry);
      say(o, line);
    }
  }
  o.result = {{"k", opt.k}, {"max_len", opt.max_len}, {"rows", rows}};
  if (opt.cover) {
    o.result["C"] = opt.C;
    o.result["D"] = opt.D;
  }
  return o;
}

Outcome cmd_equiv(const Sst& a, const Sst& b, const Options& opt) {
  Outcome o;
  const auto r = check_equivalence_bounded(a, b, opt.max_len, opt.budget,
                                           opt.serial ? Exec::Serial : Exec::Parallel);
  o.result = {{"equal", r.equal}, {"inputs_scanned", r.inputs_scanned}, {"max_len", opt.max_len}};
  if (r.counterexample) {
    o.result["counterexample"] = *r.counterexample;
    o.result["first_outputs"] = r.first_outputs;
    o.result["second_outputs"] = r.second_outputs;
    o.code = kVerdict;
    say(o, "counterexample: " + shown(*r.counterexample));
    std::string fa, fb;
    for (const auto& w : r.first_outputs) fa += " " + shown(w);
    for (const auto& w : r.second_outputs) fb += " " + shown(w);
    say(o, "  first: {" + fa + " }");
    say(o, "  second:{" + fb + " }");
  } else {
    say(o, "equal on all " + std::to_string(r.inputs_scanned) + " inputs up to length " +
               std::to_string(opt.max_len));
  }
  return o;
}

Outcome cmd_oracle(const Sst& sst, const Options& opt) {
  Outcome o;
  const Exec exec = opt.serial ? Exec::Serial : Exec::Parallel;
  const auto v = valuedness_oracle(sst, opt.max_len, opt.budget, exec);
  const auto a = ambiguity_oracle(sst, opt.max_len, opt.budget, exec);
  o.result = {{"valuedness", oracle_json(v)}, {"ambiguity", oracle_json(a)}, {"max_len", opt.max_len}};
  say(o, "most outputs: " + std::to_string(v.maximum) + " on " + shown(v.witness));
  say(o, "most runs:    " + std::to_string(a.maximum) + " on " + shown(a.witness));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming string transducer analyses"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub, std::size_t files) {
    sub->add_option("files", opt.files, "SST file(s)")->required()->expected(static_cast<int>(files));
    sub->add_flag("--json", opt.as_json, "JSON report");
    sub->add_option("--budget", opt.budget, "enumeration budget");
    sub->add_option("--seed", opt.seed, "recorded in the report");
    return sub;
  };

  common(app.add_subcommand("validate", "parse and check a file"), 1);
  auto* eval = common(app.add_subcommand("eval", "outputs on one input"), 1);
  eval->add_option("--input", opt.input, "input word")->required();
  auto* runs = common(app.add_subcommand("runs", "accepting runs on one input"), 1);
  runs->add_option("--input", opt.input, "input word")->required();
  auto* amb = common(app.add_subcommand("ambiguity", "finite-ambiguity decision"), 1);
  amb->add_option("--max-len", opt.max_len, "oracle input length");
  auto* val = common(app.add_subcommand("valuedness", "finite-valuedness analysis"), 1);
  val->add_option("--max-len", opt.max_len, "oracle input length");
  val->add_option("--component-len", opt.component_len, "W-pattern phase length bound");
  val->add_option("--max-candidates", opt.max_candidates, "W-pattern candidate budget");
  val->add_option("--amplify", opt.amplify, "also look for this many outputs on one input");
  val->add_flag("--serial", opt.serial, "single-threaded search");
  auto* del = common(app.add_subcommand("delay", "delay between same-output runs"), 1);
  del->add_option("--input", opt.input, "input word")->required();
  del->add_option("--C", opt.C, "cut bound");
  del->add_option("--runs", opt.runs, "run indices i,j");
  auto* dec = common(app.add_subcommand("decompose", "selector table"), 1);
  dec->add_option("--k", opt.k, "number of selectors");
  dec->add_option("--max-len", opt.max_len, "largest input length");
  dec->add_flag("--cover", opt.cover, "also report the semantic cover size");
  dec->add_option("--C", opt.C, "cover cut bound");
  dec->add_option("--D", opt.D, "cover delay bound");
  auto* eq = common(app.add_subcommand("equiv", "bounded equivalence of two files"), 2);
  eq->add_option("--max-len", opt.max_len, "largest input length");
  eq->add_flag("--serial", opt.serial, "single-threaded scan");
  auto* orc = common(app.add_subcommand("oracle", "brute-force valuedness and ambiguity"), 1);
  orc->add_option("--max-len", opt.max_len, "largest input length");
  orc->add_flag("--serial", opt.serial, "single-threaded scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  Outcome outcome;
  json files = json::array();
  try {
    std::vector<Sst> machines;
    for (const auto& path : opt.files) {
      machines.push_back(load_sst(path));
      files.push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64(path))}});
    }
    const Sst& s = machines.front();
    if (command == "validate") outcome = cmd_validate(s, opt);
    else if (command == "eval") outcome = cmd_eval(s, opt);
    else if (command == "runs") outcome = cmd_runs(s, opt);
    else if (command == "ambiguity") outcome = cmd_ambiguity(s, opt);
    else if (command == "valuedness") outcome = cmd_valuedness(s, opt);
    else if (command == "delay") outcome = cmd_delay(s, opt);
    else if (command == "decompose") outcome = cmd_decompose(s, opt);
    else if (command == "equiv") outcome = cmd_equiv(s, machines[1], opt);
    else if (command == "oracle") outcome = cmd_oracle(s, opt);
  } catch (const Error& e) {
    if (opt.as_json) {
      json err = {{"command", command},
                  {"files", files},
                  {"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
      std::cout << err.dump(2) << '\n';
    } else {
      std::cerr << "error [" << to_string(e.code()) << "] " << e.what() << '\n';
    }
    return kError;
  }

  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (opt.as_json) {
    json report = {{"command", command},
                   {"files", files},
                   {"result", outcome.result},
                   {"exit_code", outcome.code},
                   {"seed", opt.seed},
                   {"budgets",
                    {{"budget", opt.budget},
                     {"max_len", opt.max_len},
                     {"component_len", opt.component_len},
                     {"max_candidates", opt.max_candidates}}},
                   {"wall_time_ms", static_cast<std::int64_t>(ms)}};
    std::cout << report.dump(2) << '\n';
  } else {
    for (const auto& line : outcome.lines) std::cout << line << '\n';
  }
  return outcome.code;
}
