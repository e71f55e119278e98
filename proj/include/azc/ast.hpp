#ifndef AZC_AST_HPP
#define AZC_AST_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "azc/span.hpp"
#include "azc/type.hpp"

namespace azc {

struct Term;
using TermRef = std::shared_ptr<const Term>;

/// The three assignment operators: `&-` (alias), `:=` (copy), `<-` (move).
enum class AssignOp { Alias, Copy, Move };

const char* assign_op_text(AssignOp op);

/// Atomic literals are signed integers and booleans.
using AtomValue = std::variant<int64_t, bool>;

std::string atom_to_string(const AtomValue& v);

struct AtomTerm {
    AtomValue value;
};

struct VarTerm {
    std::string name;
};

struct FieldAccessTerm {
    TermRef target;
    std::string field;
};

struct NewTerm {
    TypeRef type;
};

/// `let x: t { body }` — introduces `x`, unbound, for the extent of `body`.
struct LetTerm {
    std::string name;
    TypeRef type;
    TermRef body;
};

/// Anonymous function literal. `type` is the full function type; `params`
/// repeats the declaration order of its domain.
struct LambdaTerm {
    TypeRef type;
    std::vector<std::string> params;
    TermRef body;
};

/// `x <op> value`. The left operand is held as a Var term so it evaluates,
/// types and traces through the ordinary paths.
struct AssignVarTerm {
    TermRef lhs; // always a VarTerm
    AssignOp op;
    TermRef value;
};

/// `t.x <op> value`, with the left operand held as a FieldAccess term.
struct AssignFieldTerm {
    TermRef lhs; // always a FieldAccessTerm
    AssignOp op;
    TermRef value;
};

struct CallArg {
    std::string name;
    AssignOp op;
    TermRef value;
    SourceSpan span;
};

struct CallTerm {
    TermRef callee;
    std::vector<CallArg> args;
};

struct ReturnTerm {
    AssignOp op;
    TermRef value;
};

struct IfTerm {
    TermRef cond;
    TermRef then_branch;
    TermRef else_branch;
};

struct SeqTerm {
    TermRef first;
    TermRef second;
};

/// One term. Terms are immutable and shared; node identity (the Term
/// address) keys the flow-insensitive type table.
struct Term {
    SourceSpan span;
    std::variant<AtomTerm, VarTerm, FieldAccessTerm, NewTerm, LetTerm, LambdaTerm,
                 AssignVarTerm, AssignFieldTerm, CallTerm, ReturnTerm, IfTerm, SeqTerm>
        node;
};

template <typename Node>
TermRef make_term(SourceSpan span, Node node) {
    return std::make_shared<Term>(Term{span, std::move(node)});
}

template <typename Node>
const Node* term_as(const TermRef& t) {
    return std::get_if<Node>(&t->node);
}

/// Structural equality ignoring spans (used by round-trip checks).
bool term_equal(const TermRef& a, const TermRef& b);

/// Renames free occurrences of the given identifiers. Used for the
/// alpha-renaming of callee parameters; untouched subtrees are shared, and
/// nested lambda literals are never entered (their bodies cannot reference
/// enclosing identifiers). Call-argument names and field names are labels,
/// not variable references, and are left alone.
TermRef rename_identifiers(const TermRef& t, const std::map<std::string, std::string>& subst);

} // namespace azc

#endif
