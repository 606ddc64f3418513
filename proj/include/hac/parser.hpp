#pragma once

#include <string_view>

#include "hac/alphabet.hpp"
#include "hac/formula.hpp"
#include "hac/predicate.hpp"

namespace hac
{

/// Parses the ASCII formula syntax:
///
///   expr  := or
///   or    := and ('|' and)*              left-associative
///   and   := until ('&' until)*          left-associative
///   until := unary ('U' until)?          right-associative
///   unary := ('!' | 'X' | 'F' | 'G') unary | primary
///   primary := '(' expr ')' | 'true' | 'false' | symbol
///            | '@' name ['(' params ')'] ['(' count ')']
///            | '[' ineq ']'
///   count := ('<-' | '->') '#' unary
///   ineq  := ['-'] term (('+' | '-') term)* '>=' '0'
///   term  := [int '*'] (count | 'const')
///
/// F, G and false are desugared (F f = true U f, G f = !F !f, false = !true).
/// `k*const` stands for k * <-#true, which equals k only at position 0.
///
/// Throws parse_error with the byte offset of the offending token.
formula parse_formula( std::string_view text, const alphabet& sigma, const table_registry& tables = {} );

} // namespace hac
