#ifndef AZC_TYPECHECK_HPP
#define AZC_TYPECHECK_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "azc/ast.hpp"
#include "azc/diagnostics.hpp"
#include "azc/type.hpp"

namespace azc {

/// Identifier -> declared type. Scopes nest lexically; lambda bodies start
/// from the globals only (no closure capture).
using TypeScope = std::map<std::string, TypeRef>;

/// Flow-insensitive typing: maps term nodes (by identity) to their type.
/// Immutable once built for a given tree; the evaluator extends it with
/// entries for alpha-renamed call bodies.
struct TypeEnv {
    std::unordered_map<const Term*, TypeRef> nodes;

    const TypeRef& of(const Term& t) const;
    const TypeRef* try_of(const Term& t) const;
};

/// Prelude types for the built-in primitives ($add, $sub, $mul, $eq, $gt,
/// $not). These identifiers are not lexable from user source.
const TypeScope& prelude_types();

/// Builds the typing for a whole program: annotation propagation for
/// let/lambda/new nodes, declaration types for variable occurrences, the
/// @own @mut default for atom literals, codomain projection for calls and
/// field projection for field accesses. Rejects unknown names, lambda
/// bodies that reference enclosing variables, ill-formed qualifier sets,
/// non-function callees and non-structure instantiations.
TypeEnv build_type_env(const TermRef& program,
                       const TypeScope& globals = prelude_types()); // throws StaticError

/// Adds entries for a (renamed) callee body typed under the given scope
/// and return-identifier type. Idempotent over shared subtrees.
void extend_type_env(TypeEnv& env, const TermRef& body, const TypeScope& globals,
                     const TypeScope& locals, const TypeRef& ret_type);

/// Every call's argument-name set must equal the callee's parameter-name
/// set. Returns one diagnostic per violation.
std::vector<Diagnostic> check_arity_and_names(const TermRef& program, const TypeEnv& env);

} // namespace azc

#endif
