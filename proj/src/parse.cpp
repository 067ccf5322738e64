#include "sst/parse.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace sst {

namespace {

struct Token {
  std::string text;
  std::size_t column = 0;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '{' || c == '}' || c == ';') {
      tokens.push_back({std::string(1, c), i + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' &&
           line[j] != '#' && line[j] != '{' && line[j] != '}' && line[j] != ';')
      ++j;
    tokens.push_back({std::string(line.substr(i, j - i)), i + 1});
    i = j;
  }
  return tokens;
}

class Parser {
 public:
  Sst run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++line_no;
      line_ = line_no;
      auto tokens = tokenize(text.substr(start, end - start));
      if (!tokens.empty()) declaration(tokens);
      start = end + 1;
    }
    if (!have_alphabet_ || !have_vars_ || !have_states_) {
      throw ParseError(ErrorCode::Syntax, line_, 1,
                       "document must declare alphabet:, vars: and states:");
    }
    try {
      return Sst(std::move(def_));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.code(), line_, 1, e.what());
    }
  }

 private:
  [[noreturn]] void error(ErrorCode code, const Token& at, const std::string& msg) const {
    throw ParseError(code, line_, at.column, msg);
  }

  void declaration(const std::vector<Token>& tokens) {
    const auto& head = tokens[0].text;
    if (head == "alphabet:") {
      alphabet(tokens);
    } else if (head == "vars:") {
      require(have_alphabet_, tokens[0], "vars: must follow alphabet:");
      vars(tokens);
    } else if (head == "states:") {
      require(have_vars_, tokens[0], "states: must follow vars:");
      states(tokens);
    } else if (head == "initial:") {
      require(have_states_, tokens[0], "initial: must follow states:");
      for (std::size_t i = 1; i < tokens.size(); ++i) def_.initial.push_back(state(tokens[i]));
    } else if (head == "init") {
      require(have_states_, tokens[0], "init must follow states:");
      init(tokens);
    } else if (head == "final") {
      require(have_states_, tokens[0], "final must follow states:");
      final_output(tokens);
    } else if (head == "trans") {
      require(have_states_, tokens[0], "trans must follow states:");
      transition(tokens);
    } else {
      error(ErrorCode::Syntax, tokens[0], "unknown declaration '" + head + "'");
    }
  }

  void require(bool ok, const Token& at, const std::string& msg) const {
    if (!ok) error(ErrorCode::Syntax, at, msg);
  }

  void alphabet(const std::vector<Token>& tokens) {
    require(!have_alphabet_, tokens[0], "alphabet declared twice");
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto& tok = tokens[i];
      if (tok.text.size() != 1) error(ErrorCode::Syntax, tok, "letters must be single characters");
      if (def_.alphabet.find(tok.text[0]) != std::string::npos)
        error(ErrorCode::Syntax, tok, "duplicate letter '" + tok.text + "'");
      def_.alphabet.push_back(tok.text[0]);
    }
    have_alphabet_ = true;
  }

  void vars(const std::vector<Token>& tokens) {
    require(!have_vars_, tokens[0], "vars declared twice");
    require(tokens.size() > 1, tokens[0], "at least one variable is required");
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto& tok = tokens[i];
      if (var(tok.text)) error(ErrorCode::Syntax, tok, "duplicate variable '" + tok.text + "'");
      def_.variables.push_back(tok.text);
    }
    have_vars_ = true;
  }

  void states(const std::vector<Token>& tokens) {
    require(!have_states_, tokens[0], "states declared twice");
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto& tok = tokens[i];
      for (const auto& s : def_.states)
        if (s == tok.text) error(ErrorCode::Syntax, tok, "duplicate state '" + tok.text + "'");
      def_.states.push_back(tok.text);
    }
    def_.final_output.assign(def_.states.size(), std::nullopt);
    def_.initial_assignment.assign(def_.variables.size(), Word{});
    have_states_ = true;
  }

  std::optional<VarId> var(std::string_view name) const {
    for (VarId x = 0; x < def_.variables.size(); ++x)
      if (def_.variables[x] == name) return x;
    return std::nullopt;
  }

  StateId state(const Token& tok) const {
    for (StateId q = 0; q < def_.states.size(); ++q)
      if (def_.states[q] == tok.text) return q;
    error(ErrorCode::UnknownSymbol, tok, "unknown state '" + tok.text + "'");
  }

  VarId variable(const Token& tok) const {
    if (auto x = var(tok.text)) return *x;
    error(ErrorCode::UnknownSymbol, tok, "unknown variable '" + tok.text + "'");
  }

  Word letters(const Token& tok) const {
    for (char c : tok.text)
      if (def_.alphabet.find(c) == std::string::npos)
        error(ErrorCode::UnknownSymbol, tok, "unknown symbol '" + tok.text + "'");
    return tok.text;
  }

  /// Appends tokens[from, to) to image; `used` tracks variable occurrences
  /// for the copyless check.
  void expression(const std::vector<Token>& tokens, std::size_t from, std::size_t to,
                  Image& image, std::vector<bool>& used) const {
    for (std::size_t i = from; i < to; ++i) {
      const auto& tok = tokens[i];
      if (auto x = var(tok.text)) {
        if (used[*x])
          error(ErrorCode::CopylessViolation, tok,
                "copyless violation: variable " + tok.text + " occurs more than once");
        used[*x] = true;
        image.push_back(Sym::var(*x));
      } else {
        for (char c : letters(tok)) image.push_back(Sym::letter(c));
      }
    }
  }

  void init(const std::vector<Token>& tokens) {
    require(tokens.size() >= 3 && tokens[2].text == "=", tokens[0],
            "expected 'init <var> = <letters>'");
    const VarId x = variable(tokens[1]);
    Word w;
    for (std::size_t i = 3; i < tokens.size(); ++i) w += letters(tokens[i]);
    def_.initial_assignment[x] = w;
  }

  void final_output(const std::vector<Token>& tokens) {
    require(tokens.size() >= 3 && tokens[2].text == "->", tokens[0],
            "expected 'final <state> -> <expression>'");
    const StateId q = state(tokens[1]);
    if (def_.final_output[q]) error(ErrorCode::Syntax, tokens[1], "final output declared twice");
    Image image;
    std::vector<bool> used(def_.variables.size(), false);
    expression(tokens, 3, tokens.size(), image, used);
    def_.final_output[q] = std::move(image);
  }

  void transition(const std::vector<Token>& tokens) {
    require(tokens.size() >= 6, tokens[0], "expected 'trans <src> <letter> <dst> { ... }'");
    Transition tr;
    tr.source = state(tokens[1]);
    if (tokens[2].text.size() != 1 || def_.alphabet.find(tokens[2].text[0]) == std::string::npos)
      error(ErrorCode::UnknownSymbol, tokens[2], "unknown letter '" + tokens[2].text + "'");
    tr.letter = tokens[2].text[0];
    tr.target = state(tokens[3]);
    if (tokens[4].text != "{") error(ErrorCode::Syntax, tokens[4], "expected '{'");
    if (tokens.back().text != "}") error(ErrorCode::Syntax, tokens.back(), "expected '}' at end of line");

    const std::size_t nx = def_.variables.size();
    std::vector<std::optional<Image>> images(nx);
    std::vector<bool> used(nx, false);
    std::size_t i = 5;
    const std::size_t close = tokens.size() - 1;
    while (i < close) {
      std::size_t j = i;
      while (j < close && tokens[j].text != ";") ++j;
      if (j > i) {
        if (j - i < 2 || tokens[i + 1].text != ":=")
          error(ErrorCode::Syntax, tokens[i], "expected '<var> := <expression>'");
        const VarId x = variable(tokens[i]);
        if (images[x]) error(ErrorCode::Syntax, tokens[i], "variable " + tokens[i].text + " assigned twice");
        images[x] = Image{};
        expression(tokens, i + 2, j, *images[x], used);
      }
      i = j + 1;
    }
    tr.update.images.resize(nx);
    for (VarId x = 0; x < nx; ++x) {
      if (images[x]) {
        tr.update.images[x] = std::move(*images[x]);
      } else {
        if (used[x])
          error(ErrorCode::CopylessViolation, tokens.back(),
                "copyless violation: variable " + def_.variables[x] +
                    " is used on a right-hand side and implicitly kept");
        tr.update.images[x] = {Sym::var(x)};
      }
    }
    def_.transitions.push_back(std::move(tr));
  }

  SstDefinition def_;
  std::size_t line_ = 0;
  bool have_alphabet_ = false;
  bool have_vars_ = false;
  bool have_states_ = false;
};

}  // namespace

Sst parse_sst(std::string_view text) { return Parser{}.run(text); }

Sst load_sst(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sst(buf.str());
}

std::string format_sst(const Sst& sst) {
  std::ostringstream out;
  out << "alphabet:";
  for (char c : sst.alphabet()) out << ' ' << c;
  out << "\nvars:";
  for (VarId x = 0; x < sst.num_vars(); ++x) out << ' ' << sst.var_name(x);
  out << "\nstates:";
  for (StateId q = 0; q < sst.num_states(); ++q) out << ' ' << sst.state_name(q);
  out << "\ninitial:";
  for (StateId q : sst.definition().initial) out << ' ' << sst.state_name(q);
  out << '\n';
  for (VarId x = 0; x < sst.num_vars(); ++x) {
    const auto& w = sst.initial_assignment()[x];
    if (w.empty()) continue;
    out << "init " << sst.var_name(x) << " =";
    for (char c : w) out << ' ' << c;
    out << '\n';
  }
  for (StateId q = 0; q < sst.num_states(); ++q) {
    if (!sst.is_final(q)) continue;
    out << "final " << sst.state_name(q) << " ->";
    const auto rhs = to_string(sst, sst.final_output(q));
    if (!rhs.empty()) out << ' ' << rhs;
    out << '\n';
  }
  for (const auto& tr : sst.transitions()) {
    out << "trans " << sst.state_name(tr.source) << ' ' << tr.letter << ' '
        << sst.state_name(tr.target) << ' ' << to_string(sst, tr.update) << '\n';
  }
  return out.str();
}

}  // namespace sst
