#ifndef AZC_PARSER_HPP
#define AZC_PARSER_HPP

#include <string>
#include <vector>

#include "azc/ast.hpp"
#include "azc/lexer.hpp"

namespace azc {

/// Parses a token sequence into the root term. Rejects repeated lambda
/// parameters, repeated call-argument names, and any identifier declared
/// twice in the same lexical scope (shadowing). `extra_scope` names count
/// as already declared; the test harness uses it when parsing fragments
/// whose roots are bound externally.
TermRef parse_program(const std::vector<Token>& tokens,
                      const std::vector<std::string>& extra_scope = {}); // throws StaticError

/// Convenience: tokenize + parse.
TermRef parse_source(const std::string& source,
                     const std::vector<std::string>& extra_scope = {});

/// Parses a single type expression (used by tests and the matrix driver).
TypeRef parse_type_source(const std::string& source);

/// Deterministic pretty-printer; parse(format(t)) is structurally equal
/// to t.
std::string format_term(const TermRef& term);

} // namespace azc

#endif
