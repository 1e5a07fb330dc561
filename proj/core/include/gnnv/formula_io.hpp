#pragma once

#include <string>
#include <string_view>

#include "gnnv/formula.hpp"

namespace gnnv {

/// Parses the ASCII formula grammar:
///   f    ::= or ('->' f)?
///   or   ::= and ('|' and)*
///   and  ::= un ('&' un)*
///   un   ::= '~' un | '<>' un | '[]' un | '<' INT '>' un | '[g]' un | prim
///   prim ::= 'true' | 'false' | IDENT | '(' f ')' | sum CMP sum
///   sum  ::= ['-'] term (('+'|'-') term)*
///   term ::= INT | INT '*' atom | atom
///   atom ::= '#(' f ')' | '#g(' f ')' | 'ind(' f ')'
/// Sugar is desugared while parsing. Throws InputError with a position.
Formula parse_formula(std::string_view text);

/// Prints the core syntax; parse_formula(print_formula(f)) == f.
std::string print_formula(Formula f);
std::string print_lin(const LinExpr& xi);

}  // namespace gnnv
