#ifndef AZC_LEXER_HPP
#define AZC_LEXER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "azc/diagnostics.hpp"
#include "azc/span.hpp"

namespace azc {

enum class TokenKind {
    Ident,
    Int,
    KwLet,
    KwFun,
    KwNew,
    KwReturn,
    KwIf,
    KwElse,
    KwTrue,
    KwFalse,
    KwNot,
    KwRec,
    QualCst,
    QualMut,
    QualOwn,
    QualBrw,
    OpAlias,   // &-
    OpCopy,    // :=
    OpMove,    // <-
    Arrow,     // ->
    Plus,
    Minus,
    Star,
    Gt,
    EqEq,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
    Semi,      // explicit `;` or an inserted statement break at a newline
    End,
};

const char* token_kind_name(TokenKind k);

struct Token {
    TokenKind kind;
    std::string text;
    SourceSpan span;
};

/// Lexes UTF-8 source into tokens. `//` comments run to end of line. A
/// newline yields a Semi token when the previous token can end a statement
/// (identifier, literal, `)`, `}`, `true`, `false`), so line breaks act as
/// the sequence operator.
std::vector<Token> tokenize(const std::string& source); // throws StaticError

} // namespace azc

#endif
