#pragma once

#include <string>
#include <string_view>

#include "sst/core.hpp"

namespace sst {

/// Parses the line-oriented SST format:
///
///     alphabet: 0 1
///     vars: X1 X0
///     states: qA qB
///     initial: qA qB
///     init X0 = 1
///     final qA -> X0 X1
///     trans qA 0 qA { X0 := 0 X0 ; X1 := X1 }
///
/// '#' starts a comment. In right-hand sides a token naming a declared
/// variable is a variable occurrence; any other token must consist of
/// alphabet letters. Variables not mentioned in a transition keep their
/// value. Throws ParseError with the line and column of the problem.
Sst parse_sst(std::string_view text);

Sst load_sst(const std::string& path);

/// Inverse of parse_sst, up to comments and whitespace.
std::string format_sst(const Sst& sst);

}  // namespace sst
