#include "azc/parser.hpp"

#include <optional>
#include <set>
#include <sstream>

namespace azc {

namespace {

// Identifiers the desugared arithmetic builtins resolve to. The `$` prefix
// keeps them out of the user namespace (the lexer cannot produce it).
constexpr const char* kAdd = "$add";
constexpr const char* kSub = "$sub";
constexpr const char* kMul = "$mul";
constexpr const char* kEq = "$eq";
constexpr const char* kGt = "$gt";
constexpr const char* kNot = "$not";

class Parser {
  public:
    Parser(const std::vector<Token>& tokens, const std::vector<std::string>& extra_scope)
        : tokens_(tokens) {
        scopes_.emplace_back(extra_scope.begin(), extra_scope.end());
    }

    TermRef parse_program() {
        skip_semis();
        TermRef t = parse_sequence();
        expect(TokenKind::End);
        return t;
    }

    TypeRef parse_type_only() {
        TypeRef t = parse_type();
        expect(TokenKind::End);
        return t;
    }

  private:
    // --- token plumbing -------------------------------------------------

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    bool at(TokenKind k) const { return peek().kind == k; }
    bool accept(TokenKind k) {
        if (!at(k)) return false;
        advance();
        return true;
    }
    const Token& expect(TokenKind k) {
        if (!at(k)) fail_expecting({k});
        return advance();
    }
    [[noreturn]] void fail_expecting(std::initializer_list<TokenKind> kinds) {
        std::ostringstream msg;
        msg << "expected ";
        bool first = true;
        for (TokenKind k : kinds) {
            if (!first) msg << " or ";
            msg << token_kind_name(k);
            first = false;
        }
        msg << ", found " << token_kind_name(peek().kind);
        throw StaticError(make_static_diag(StaticErrorKind::ParseError, peek().span, msg.str()));
    }
    void skip_semis() {
        while (accept(TokenKind::Semi)) {
        }
    }

    // --- scopes (shadowing is a parse-time rejection) --------------------

    void declare(const std::string& name, const SourceSpan& span) {
        for (const auto& scope : scopes_) {
            if (scope.contains(name)) {
                throw StaticError(make_static_diag(
                    StaticErrorKind::ShadowingDeclaration, span,
                    "`" + name + "` is already declared in an enclosing scope"));
            }
        }
        scopes_.back().insert(name);
    }

    struct ScopeGuard {
        Parser& p;
        explicit ScopeGuard(Parser& parser) : p(parser) { p.scopes_.emplace_back(); }
        ~ScopeGuard() { p.scopes_.pop_back(); }
    };

    // Lambda bodies see none of the enclosing user declarations; their
    // parameters may legitimately reuse outer names (the evaluator's
    // alpha-renaming deals with the dynamic clash).
    struct LambdaScopeGuard {
        Parser& p;
        std::vector<std::set<std::string>> saved;
        explicit LambdaScopeGuard(Parser& parser) : p(parser) {
            saved.swap(p.scopes_);
            p.scopes_.emplace_back();
        }
        ~LambdaScopeGuard() { p.scopes_.swap(saved); }
    };

    // --- types -----------------------------------------------------------

    std::optional<QualifierSet> parse_explicit_qualifiers() {
        bool any = false;
        bool brw = false, own = false, cst = false, mut = false;
        for (;;) {
            const Token& t = peek();
            bool* slot = nullptr;
            bool* rival = nullptr;
            switch (t.kind) {
            case TokenKind::QualBrw: slot = &brw; rival = &own; break;
            case TokenKind::QualOwn: slot = &own; rival = &brw; break;
            case TokenKind::QualCst: slot = &cst; rival = &mut; break;
            case TokenKind::QualMut: slot = &mut; rival = &cst; break;
            default: slot = nullptr; break;
            }
            if (!slot) break;
            if (*slot || *rival) {
                throw StaticError(make_static_diag(
                    StaticErrorKind::MalformedQualifiers, t.span,
                    "conflicting or repeated qualifier `" + t.text + "`"));
            }
            *slot = true;
            any = true;
            advance();
        }
        if (!any) return std::nullopt;
        QualifierSet q;
        q.brw = brw;
        q.own = !brw;
        q.mut = mut;
        q.cst = !mut;
        // Unstated halves fall back to the defaults (@own, @cst).
        if (!brw && !own) { q.own = true; q.brw = false; }
        if (!cst && !mut) { q.cst = true; q.mut = false; }
        return q;
    }

    TypeRef parse_type() { return parse_type_inner(std::nullopt); }

    // `pending` carries qualifiers written in front of a rec binder; they
    // apply to the binder's body (writing them in both places conflicts).
    TypeRef parse_type_inner(std::optional<QualifierSet> pending) {
        std::optional<QualifierSet> quals = parse_explicit_qualifiers();
        if (quals && pending) {
            throw StaticError(make_static_diag(
                StaticErrorKind::MalformedQualifiers, peek().span,
                "qualifiers appear both before and after a rec binder"));
        }
        if (!quals) quals = pending;

        if (at(TokenKind::KwRec)) {
            advance();
            const Token& var = expect(TokenKind::Ident);
            expect(TokenKind::Dot);
            rec_vars_.push_back(var.text);
            TypeRef body = parse_type_inner(quals);
            rec_vars_.pop_back();
            // The binder is transparent: it mirrors its body's qualifiers.
            return make_rec_binder(var.text, body, body->qualifiers);
        }

        QualifierSet q = quals.value_or(QualifierSet::defaults());

        if (at(TokenKind::Ident)) {
            const Token& name = advance();
            for (auto it = rec_vars_.rbegin(); it != rec_vars_.rend(); ++it) {
                if (*it == name.text) return make_rec_var(name.text, q);
            }
            return make_atomic(name.text, q);
        }
        if (accept(TokenKind::LParen)) {
            std::vector<std::pair<std::string, TypeRef>> params;
            std::set<std::string> seen;
            if (!at(TokenKind::RParen)) {
                do {
                    const Token& name = expect(TokenKind::Ident);
                    if (!seen.insert(name.text).second) {
                        throw StaticError(make_static_diag(
                            StaticErrorKind::DuplicateParameter, name.span,
                            "parameter `" + name.text + "` appears twice"));
                    }
                    expect(TokenKind::Colon);
                    params.emplace_back(name.text, parse_type());
                } while (accept(TokenKind::Comma));
            }
            expect(TokenKind::RParen);
            expect(TokenKind::Arrow);
            TypeRef codomain = parse_type();
            return make_function(std::move(params), std::move(codomain), q);
        }
        if (accept(TokenKind::LBrace)) {
            std::vector<std::pair<std::string, TypeRef>> fields;
            std::set<std::string> seen;
            if (!at(TokenKind::RBrace)) {
                do {
                    const Token& name = expect(TokenKind::Ident);
                    if (!seen.insert(name.text).second) {
                        throw StaticError(make_static_diag(
                            StaticErrorKind::DuplicateParameter, name.span,
                            "field `" + name.text + "` appears twice"));
                    }
                    expect(TokenKind::Colon);
                    fields.emplace_back(name.text, parse_type());
                } while (accept(TokenKind::Comma));
            }
            expect(TokenKind::RBrace);
            return make_structure(std::move(fields), q);
        }
        fail_expecting({TokenKind::Ident, TokenKind::LParen, TokenKind::LBrace});
    }

    // --- terms -----------------------------------------------------------

    TermRef parse_sequence() {
        TermRef first = parse_statement();
        skip_semis();
        if (at(TokenKind::End) || at(TokenKind::RBrace) || at(TokenKind::RParen)) {
            return first;
        }
        TermRef rest = parse_sequence(); // right-associative
        return make_term(join(first->span, rest->span), SeqTerm{first, rest});
    }

    TermRef parse_statement() {
        if (at(TokenKind::KwLet)) return parse_let();
        if (at(TokenKind::KwReturn)) return parse_return();
        return parse_assignment();
    }

    TermRef parse_let() {
        const Token& let_tok = expect(TokenKind::KwLet);
        const Token& name = expect(TokenKind::Ident);
        expect(TokenKind::Colon);
        TypeRef type = parse_type();
        expect(TokenKind::LBrace);
        ScopeGuard scope(*this);
        declare(name.text, name.span);
        skip_semis();
        TermRef body = parse_sequence();
        const Token& close = expect(TokenKind::RBrace);
        return make_term(join(let_tok.span, close.span), LetTerm{name.text, type, body});
    }

    TermRef parse_return() {
        const Token& ret_tok = expect(TokenKind::KwReturn);
        AssignOp op = parse_assign_op();
        TermRef value = parse_statement();
        return make_term(join(ret_tok.span, value->span), ReturnTerm{op, value});
    }

    AssignOp parse_assign_op() {
        if (accept(TokenKind::OpAlias)) return AssignOp::Alias;
        if (accept(TokenKind::OpCopy)) return AssignOp::Copy;
        if (accept(TokenKind::OpMove)) return AssignOp::Move;
        fail_expecting({TokenKind::OpAlias, TokenKind::OpCopy, TokenKind::OpMove});
    }

    bool at_assign_op() const {
        return at(TokenKind::OpAlias) || at(TokenKind::OpCopy) || at(TokenKind::OpMove);
    }

    TermRef parse_assignment() {
        TermRef lhs = parse_comparison();
        if (!at_assign_op()) return lhs;
        const Token& op_tok = peek();
        AssignOp op = parse_assign_op();
        TermRef value = parse_statement(); // assignments nest to the right
        SourceSpan span = join(lhs->span, value->span);
        if (term_as<VarTerm>(lhs)) {
            return make_term(span, AssignVarTerm{lhs, op, value});
        }
        if (term_as<FieldAccessTerm>(lhs)) {
            return make_term(span, AssignFieldTerm{lhs, op, value});
        }
        throw StaticError(make_static_diag(
            StaticErrorKind::ParseError, op_tok.span,
            "assignment target must be a variable or a field access"));
    }

    TermRef binop_call(const char* builtin, const Token& op_tok, TermRef lhs, TermRef rhs) {
        SourceSpan span = join(lhs->span, rhs->span);
        TermRef callee = make_term(op_tok.span, VarTerm{builtin});
        std::vector<CallArg> args;
        args.push_back(CallArg{"lhs", AssignOp::Copy, lhs, lhs->span});
        args.push_back(CallArg{"rhs", AssignOp::Copy, rhs, rhs->span});
        return make_term(span, CallTerm{callee, std::move(args)});
    }

    TermRef parse_comparison() {
        TermRef lhs = parse_additive();
        for (;;) {
            if (at(TokenKind::Gt)) {
                const Token& op = advance();
                lhs = binop_call(kGt, op, lhs, parse_additive());
            } else if (at(TokenKind::EqEq)) {
                const Token& op = advance();
                lhs = binop_call(kEq, op, lhs, parse_additive());
            } else {
                return lhs;
            }
        }
    }

    TermRef parse_additive() {
        TermRef lhs = parse_multiplicative();
        for (;;) {
            if (at(TokenKind::Plus)) {
                const Token& op = advance();
                lhs = binop_call(kAdd, op, lhs, parse_multiplicative());
            } else if (at(TokenKind::Minus)) {
                const Token& op = advance();
                lhs = binop_call(kSub, op, lhs, parse_multiplicative());
            } else {
                return lhs;
            }
        }
    }

    TermRef parse_multiplicative() {
        TermRef lhs = parse_unary();
        while (at(TokenKind::Star)) {
            const Token& op = advance();
            lhs = binop_call(kMul, op, lhs, parse_unary());
        }
        return lhs;
    }

    TermRef parse_unary() {
        if (at(TokenKind::KwNot)) {
            const Token& op = advance();
            TermRef operand = parse_unary();
            SourceSpan span = join(op.span, operand->span);
            TermRef callee = make_term(op.span, VarTerm{kNot});
            std::vector<CallArg> args;
            args.push_back(CallArg{"value", AssignOp::Copy, operand, operand->span});
            return make_term(span, CallTerm{callee, std::move(args)});
        }
        return parse_postfix();
    }

    TermRef parse_postfix() {
        TermRef t = parse_primary();
        for (;;) {
            if (accept(TokenKind::Dot)) {
                const Token& field = expect(TokenKind::Ident);
                t = make_term(join(t->span, field.span), FieldAccessTerm{t, field.text});
            } else if (at(TokenKind::LParen)) {
                t = parse_call(t);
            } else {
                return t;
            }
        }
    }

    TermRef parse_call(TermRef callee) {
        expect(TokenKind::LParen);
        std::vector<CallArg> args;
        std::set<std::string> seen;
        if (!at(TokenKind::RParen)) {
            do {
                const Token& name = expect(TokenKind::Ident);
                if (!seen.insert(name.text).second) {
                    throw StaticError(make_static_diag(
                        StaticErrorKind::DuplicateArgumentName, name.span,
                        "argument `" + name.text + "` appears twice"));
                }
                AssignOp op = parse_assign_op();
                TermRef value = parse_statement();
                args.push_back(CallArg{name.text, op, value, join(name.span, value->span)});
            } while (accept(TokenKind::Comma));
        }
        const Token& close = expect(TokenKind::RParen);
        return make_term(join(callee->span, close.span), CallTerm{callee, std::move(args)});
    }

    TermRef parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::Int: {
            advance();
            return make_term(t.span, AtomTerm{AtomValue{std::stoll(t.text)}});
        }
        case TokenKind::Minus: {
            // Negative literals only; general unary minus is `0 - x`.
            const Token& minus = advance();
            const Token& num = expect(TokenKind::Int);
            return make_term(join(minus.span, num.span),
                             AtomTerm{AtomValue{-std::stoll(num.text)}});
        }
        case TokenKind::KwTrue:
            advance();
            return make_term(t.span, AtomTerm{AtomValue{true}});
        case TokenKind::KwFalse:
            advance();
            return make_term(t.span, AtomTerm{AtomValue{false}});
        case TokenKind::Ident:
            advance();
            return make_term(t.span, VarTerm{t.text});
        case TokenKind::LParen: {
            advance();
            skip_semis();
            TermRef inner = parse_sequence();
            expect(TokenKind::RParen);
            return inner;
        }
        case TokenKind::KwIf: return parse_if();
        case TokenKind::KwFun: return parse_lambda();
        case TokenKind::KwNew: {
            advance();
            TypeRef type = parse_type();
            return make_term(t.span, NewTerm{type});
        }
        case TokenKind::KwLet:
            // A let in expression position (e.g. as an assignment operand).
            return parse_let();
        default:
            fail_expecting({TokenKind::Int, TokenKind::Ident, TokenKind::LParen});
        }
    }

    TermRef parse_if() {
        const Token& if_tok = expect(TokenKind::KwIf);
        TermRef cond = parse_assignment();
        expect(TokenKind::LBrace);
        skip_semis();
        ScopeGuard then_scope(*this);
        TermRef then_branch = parse_sequence();
        expect(TokenKind::RBrace);
        expect(TokenKind::KwElse);
        TermRef else_branch;
        if (at(TokenKind::KwIf)) {
            else_branch = parse_if();
        } else {
            expect(TokenKind::LBrace);
            skip_semis();
            ScopeGuard else_scope(*this);
            else_branch = parse_sequence();
            expect(TokenKind::RBrace);
        }
        return make_term(join(if_tok.span, else_branch->span),
                         IfTerm{cond, then_branch, else_branch});
    }

    TermRef parse_lambda() {
        const Token& fun_tok = expect(TokenKind::KwFun);
        expect(TokenKind::LParen);
        std::vector<std::string> params;
        std::vector<std::pair<std::string, TypeRef>> param_types;
        std::set<std::string> seen;
        if (!at(TokenKind::RParen)) {
            do {
                const Token& name = expect(TokenKind::Ident);
                if (!seen.insert(name.text).second) {
                    throw StaticError(make_static_diag(
                        StaticErrorKind::DuplicateParameter, name.span,
                        "parameter `" + name.text + "` appears twice"));
                }
                expect(TokenKind::Colon);
                TypeRef pt = parse_type();
                params.push_back(name.text);
                param_types.emplace_back(name.text, pt);
            } while (accept(TokenKind::Comma));
        }
        expect(TokenKind::RParen);
        expect(TokenKind::Arrow);
        TypeRef codomain = parse_type();
        TypeRef fn_type = make_function(std::move(param_types), codomain);

        expect(TokenKind::LBrace);
        LambdaScopeGuard body_scope(*this);
        for (const auto& p : params) scopes_.back().insert(p);
        skip_semis();
        TermRef body = parse_sequence();
        const Token& close = expect(TokenKind::RBrace);
        return make_term(join(fun_tok.span, close.span),
                         LambdaTerm{fn_type, std::move(params), body});
    }

    const std::vector<Token>& tokens_;
    size_t pos_ = 0;
    std::vector<std::set<std::string>> scopes_;
    std::vector<std::string> rec_vars_;
};

} // namespace

TermRef parse_program(const std::vector<Token>& tokens,
                      const std::vector<std::string>& extra_scope) {
    return Parser(tokens, extra_scope).parse_program();
}

TermRef parse_source(const std::string& source, const std::vector<std::string>& extra_scope) {
    return parse_program(tokenize(source), extra_scope);
}

TypeRef parse_type_source(const std::string& source) {
    auto tokens = tokenize(source);
    return Parser(tokens, {}).parse_type_only();
}

} // namespace azc
