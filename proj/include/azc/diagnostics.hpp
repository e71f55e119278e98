#ifndef AZC_DIAGNOSTICS_HPP
#define AZC_DIAGNOSTICS_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "azc/span.hpp"

namespace azc {

/// Dynamic classification of a reference (the transition-matrix rows).
enum class RefState { Unallocated, Unique, Shared, Borrowed, Moved };

const char* ref_state_name(RefState s);

enum class Severity { Static, Runtime };

/// Static rejection reasons. Every code is stable and documented in the
/// README's diagnostic table.
enum class StaticErrorKind {
    LexError,
    ParseError,
    DuplicateParameter,
    DuplicateArgumentName,
    ShadowingDeclaration,
    MalformedQualifiers,
    UnknownVariable,
    CapturedVariable,
    UnknownField,
    NotAFunctionType,
    NotAStructureType,
    MissingArgument,
    UnknownParameterName,
};

/// Runtime rule-premise failures. Exactly one kind per failed premise.
enum class RuntimeErrorKind {
    NotReadable,
    NotWriteable,
    NotUnique,
    AliasTargetShared,
    AliasMutabilityMismatch,
    ImmutableMutation,
    UndefinedVariable,
    UnknownField,
    CalleeNotFunction,
    ConditionNotBoolean,
    CopyOfUndefined,
    MissingReturn,
    PrimOperandMismatch,
};

const char* diagnostic_code(StaticErrorKind k);
const char* diagnostic_code(RuntimeErrorKind k);

/// A rendered-ready error record: stable code, severity, human message,
/// source span, and (for runtime capability violations) the subject
/// reference's typestate at failure time.
struct Diagnostic {
    std::string code;
    Severity severity = Severity::Static;
    std::string message;
    SourceSpan span;
    std::optional<RefState> state;
};

Diagnostic make_static_diag(StaticErrorKind k, SourceSpan span, const std::string& message);

/// One-line summary plus a caret-underlined source excerpt; deterministic.
std::string render(const Diagnostic& d, const std::string& source);

/// Single-line machine-readable record: code, severity, line, column, state.
std::string render_machine(const Diagnostic& d);

/// Exception type carrying a static diagnostic out of the front end.
struct StaticError : std::runtime_error {
    Diagnostic diag;
    explicit StaticError(Diagnostic d) : std::runtime_error(d.message), diag(std::move(d)) {}
};

/// Exception type carrying a failed rule premise out of the evaluator.
struct RuntimeError : std::runtime_error {
    RuntimeErrorKind kind;
    SourceSpan span;
    std::string subject;
    std::optional<RefState> state;

    RuntimeError(RuntimeErrorKind k, SourceSpan sp, std::string subj,
                 std::optional<RefState> st = std::nullopt);

    Diagnostic to_diagnostic() const;
};

} // namespace azc

#endif
