#ifndef AZC_EVALUATOR_HPP
#define AZC_EVALUATOR_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "azc/ast.hpp"
#include "azc/context.hpp"
#include "azc/diagnostics.hpp"
#include "azc/typecheck.hpp"

namespace azc {

/// One rule application. `rule` is the rule's label (e.g. "E-Copy-Unalloc");
/// `detail` is an ordered key/value list (reference ids, locations,
/// typestates).
struct TraceEvent {
    std::string rule;
    SourceSpan span;
    std::vector<std::pair<std::string, std::string>> detail;

    std::string to_line() const;
};

struct EvalOptions {
    /// Verbatim rule semantics: no scope-exit release of bindings and no
    /// post-call parameter cleanup.
    bool strict_rules = false;
    bool trace = false;
};

/// Big-step evaluator for the twenty rules. Owns its context (fresh-id
/// counters included, so identical programs yield identical traces) and a
/// prelude of primitive functions.
class Evaluator {
  public:
    explicit Evaluator(EvalOptions options = {});

    /// Declares a root binding the way E-Let does (fresh reference, null
    /// location, no capabilities) without a surrounding scope. The test
    /// harness and the matrix driver observe references through this.
    RefId declare_root(const std::string& name, const TypeRef& type);

    /// Types `term` against the prelude plus declared roots, then
    /// evaluates it in the current context.
    RefId eval_program(const TermRef& term); // throws RuntimeError / StaticError

    /// Evaluates a term already covered by the carried type environment.
    RefId eval(const TermRef& term); // throws RuntimeError

    EvalContext& context() { return ctx_; }
    const EvalContext& context() const { return ctx_; }
    const std::vector<TraceEvent>& trace() const { return trace_; }
    const TypeEnv& types() const { return env_; }

    /// Renders the value a reference currently denotes ("<unbound>" when
    /// it has no location).
    std::string render_value(RefId r) const;

  private:
    RefId eval_let(const TermRef& t, const LetTerm& node);
    RefId eval_var(const TermRef& t, const VarTerm& node);
    RefId eval_assign(const TermRef& t, const TermRef& lhs, AssignOp op, const TermRef& rhs);
    RefId eval_field(const TermRef& t, const FieldAccessTerm& node);
    RefId eval_new(const TermRef& t, const NewTerm& node);
    RefId eval_atom(const TermRef& t, const AtomTerm& node);
    RefId eval_fun(const TermRef& t, const LambdaTerm& node);
    RefId eval_seq(const TermRef& t, const SeqTerm& node);
    RefId eval_if(const TermRef& t, const IfTerm& node);
    RefId eval_return(const TermRef& t, const ReturnTerm& node);
    RefId eval_call(const TermRef& t, const CallTerm& node);

    struct Callee {
        TypeRef type;
        std::vector<std::string> params;
        TermRef body;          // null for builtins
        std::string builtin;   // set for builtins
    };
    Callee resolve_callee(const TermRef& t);

    RefId apply_builtin(const TermRef& t, const Callee& callee,
                        const std::vector<std::string>& bound_names);

    /// Shared core of the assignment rules; operands already evaluated
    /// (right first). Applies premises in rule order and the context
    /// updates, and emits the rule's trace event.
    RefId apply_assign(const TermRef& at, const SourceSpan& rhs_span, AssignOp op, RefId left,
                       RefId right, const TypeRef& left_ty, const std::string& left_subj,
                       const std::string& right_subj);

    // Premise helpers; they throw the kinds mapped to each failed premise.
    void require_readable(RefId r, const TermRef& at, const std::string& subject);
    void require_move_source(RefId r, const SourceSpan& span, const std::string& subject);

    TypeRef lhs_type(const TermRef& lhs);
    std::string subject_of(const TermRef& operand, RefId r) const;

    void emit(const TermRef& at, std::string rule,
              std::vector<std::pair<std::string, std::string>> detail = {});

    void install_prelude();

    EvalOptions options_;
    EvalContext ctx_;
    TypeEnv env_;
    TypeScope roots_;
    std::vector<TraceEvent> trace_;
};

/// Name of the virtual return identifier in the variable table. Not
/// lexable from user source.
extern const std::string kReturnIdent;

} // namespace azc

#endif
