#pragma once

#include "vpdw/expr.hpp"

#include <string>

namespace vpdw {

struct ParseError : ExprError {
	size_t position;
	ParseError(const std::string &msg, size_t pos)
	    : ExprError(msg + " at position " + std::to_string(pos)), position(pos)
	{
	}
};

// Expression grammar:
//   expr    := ['-'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := rational | atomOrScalar | deriv | '(' expr ')' | '-' factor
//   deriv   := ('d'|'nab') '[' index ']' '(' expr ')'
//   atomOrScalar := IDENT ('[' index (',' index)* ']')? ('^' INT)?
//   index   := ['.'] IDENT          -- '.' marks a lower index
//   rational:= INT ('/' INT)?
//
// Reserved atom names: A, w, ws, h, psi, E, F, Ep, W, theta, thetap.
// Any other bracketed identifier is a constant tensor in inner space; a bare
// identifier is a named scalar coefficient. A label used twice in a monomial
// is a contracted pair; a label used once is a free index.
Expression parse(const std::string &text);

std::string print(const Expression &e);
std::string print(const Monomial &m);

} // namespace vpdw
