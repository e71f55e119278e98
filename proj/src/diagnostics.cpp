#include "azc/diagnostics.hpp"

#include <sstream>

namespace azc {

const char* ref_state_name(RefState s) {
    switch (s) {
    case RefState::Unallocated: return "unallocated";
    case RefState::Unique: return "unique";
    case RefState::Shared: return "shared";
    case RefState::Borrowed: return "borrowed";
    case RefState::Moved: return "moved";
    }
    return "?";
}

const char* diagnostic_code(StaticErrorKind k) {
    switch (k) {
    case StaticErrorKind::LexError: return "S-LEX";
    case StaticErrorKind::ParseError: return "S-PARSE";
    case StaticErrorKind::DuplicateParameter: return "S-DUP-PARAM";
    case StaticErrorKind::DuplicateArgumentName: return "S-DUP-ARG";
    case StaticErrorKind::ShadowingDeclaration: return "S-SHADOW";
    case StaticErrorKind::MalformedQualifiers: return "S-MALFORMED-QUALS";
    case StaticErrorKind::UnknownVariable: return "S-UNKNOWN-VAR";
    case StaticErrorKind::CapturedVariable: return "S-CAPTURE";
    case StaticErrorKind::UnknownField: return "S-UNKNOWN-FIELD";
    case StaticErrorKind::NotAFunctionType: return "S-NOT-FUNCTION";
    case StaticErrorKind::NotAStructureType: return "S-NOT-STRUCT";
    case StaticErrorKind::MissingArgument: return "S-MISSING-ARG";
    case StaticErrorKind::UnknownParameterName: return "S-UNKNOWN-PARAM";
    }
    return "S-UNKNOWN";
}

const char* diagnostic_code(RuntimeErrorKind k) {
    switch (k) {
    case RuntimeErrorKind::NotReadable: return "E-NOT-READABLE";
    case RuntimeErrorKind::NotWriteable: return "E-NOT-WRITEABLE";
    case RuntimeErrorKind::NotUnique: return "E-NOT-UNIQUE";
    case RuntimeErrorKind::AliasTargetShared: return "E-ALIAS-TARGET-SHARED";
    case RuntimeErrorKind::AliasMutabilityMismatch: return "E-ALIAS-MUT-MISMATCH";
    case RuntimeErrorKind::ImmutableMutation: return "E-IMMUTABLE-MUTATION";
    case RuntimeErrorKind::UndefinedVariable: return "E-UNDEF-VAR";
    case RuntimeErrorKind::UnknownField: return "E-UNKNOWN-FIELD";
    case RuntimeErrorKind::CalleeNotFunction: return "E-CALLEE-NOT-FUNCTION";
    case RuntimeErrorKind::ConditionNotBoolean: return "E-COND-NOT-BOOL";
    case RuntimeErrorKind::CopyOfUndefined: return "E-COPY-UNDEF";
    case RuntimeErrorKind::MissingReturn: return "E-MISSING-RETURN";
    case RuntimeErrorKind::PrimOperandMismatch: return "E-PRIM-OPERAND";
    }
    return "E-UNKNOWN";
}

namespace {

std::string runtime_message(RuntimeErrorKind k, const std::string& subject,
                            std::optional<RefState> state) {
    auto quoted = "`" + subject + "`";
    std::string msg;
    switch (k) {
    case RuntimeErrorKind::NotReadable: msg = quoted + " is not readable"; break;
    case RuntimeErrorKind::NotWriteable: msg = quoted + " is not writeable"; break;
    case RuntimeErrorKind::NotUnique: msg = quoted + " is not unique"; break;
    case RuntimeErrorKind::AliasTargetShared:
        msg = quoted + " is shared and cannot be reassigned by alias";
        break;
    case RuntimeErrorKind::AliasMutabilityMismatch:
        msg = "aliasing " + quoted + " would mix mutating and non-mutating borrows";
        break;
    case RuntimeErrorKind::ImmutableMutation: msg = quoted + " is not mutating"; break;
    case RuntimeErrorKind::UndefinedVariable: msg = quoted + " is not defined"; break;
    case RuntimeErrorKind::UnknownField: msg = "value has no field " + quoted; break;
    case RuntimeErrorKind::CalleeNotFunction: msg = quoted + " is not a function"; break;
    case RuntimeErrorKind::ConditionNotBoolean: msg = quoted + " is not a boolean"; break;
    case RuntimeErrorKind::CopyOfUndefined:
        msg = "copy of " + quoted + " reaches an undefined or unbound value";
        break;
    case RuntimeErrorKind::MissingReturn: msg = "return outside of a function call"; break;
    case RuntimeErrorKind::PrimOperandMismatch:
        msg = "built-in operand " + quoted + " has the wrong type";
        break;
    }
    if (state) {
        msg += std::string(" (state: ") + ref_state_name(*state) + ")";
    }
    return msg;
}

} // namespace

RuntimeError::RuntimeError(RuntimeErrorKind k, SourceSpan sp, std::string subj,
                           std::optional<RefState> st)
    : std::runtime_error(runtime_message(k, subj, st)), kind(k), span(sp),
      subject(std::move(subj)), state(st) {}

Diagnostic RuntimeError::to_diagnostic() const {
    return Diagnostic{diagnostic_code(kind), Severity::Runtime,
                      runtime_message(kind, subject, state), span, state};
}

Diagnostic make_static_diag(StaticErrorKind k, SourceSpan span, const std::string& message) {
    return Diagnostic{diagnostic_code(k), Severity::Static, message, span, std::nullopt};
}

namespace {

// The source line containing `offset`, without its terminator.
std::string line_at(const std::string& source, size_t offset, size_t* line_start) {
    size_t start = source.rfind('\n', offset == 0 ? 0 : offset - 1);
    start = (start == std::string::npos || offset == 0) ? 0 : start + 1;
    if (offset == 0) start = 0;
    size_t end = source.find('\n', offset);
    if (end == std::string::npos) end = source.size();
    *line_start = start;
    return source.substr(start, end - start);
}

} // namespace

std::string render(const Diagnostic& d, const std::string& source) {
    std::ostringstream out;
    out << (d.severity == Severity::Static ? "static" : "runtime");
    out << " error[" << d.code << "]: " << d.message << "\n";
    out << "  --> " << d.span.line << ":" << d.span.column << "\n";

    size_t offset = d.span.start_offset < source.size() ? d.span.start_offset : source.size();
    size_t line_start = 0;
    std::string line = line_at(source, offset, &line_start);
    std::string lineno = std::to_string(d.span.line);
    std::string gutter(lineno.size(), ' ');
    out << " " << gutter << " |\n";
    out << " " << lineno << " | " << line << "\n";

    size_t caret_col = offset >= line_start ? offset - line_start : 0;
    size_t caret_len = 1;
    if (d.span.end_offset > d.span.start_offset) {
        caret_len = d.span.end_offset - d.span.start_offset;
    }
    if (caret_col > line.size()) caret_col = line.size();
    if (caret_col + caret_len > line.size() + 1) {
        caret_len = line.size() >= caret_col ? line.size() - caret_col : 0;
        if (caret_len == 0) caret_len = 1;
    }
    out << " " << gutter << " | " << std::string(caret_col, ' ') << "^";
    for (size_t i = 1; i < caret_len; ++i) out << "~";
    out << "\n";
    return out.str();
}

std::string render_machine(const Diagnostic& d) {
    std::ostringstream out;
    out << "code=" << d.code;
    out << " severity=" << (d.severity == Severity::Static ? "static" : "runtime");
    out << " line=" << d.span.line << " col=" << d.span.column;
    if (d.state) out << " state=" << ref_state_name(*d.state);
    return out.str();
}

} // namespace azc
