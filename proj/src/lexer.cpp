#include "azc/lexer.hpp"

#include <cctype>
#include <map>

namespace azc {

const char* token_kind_name(TokenKind k) {
    switch (k) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Int: return "integer";
    case TokenKind::KwLet: return "'let'";
    case TokenKind::KwFun: return "'fun'";
    case TokenKind::KwNew: return "'new'";
    case TokenKind::KwReturn: return "'return'";
    case TokenKind::KwIf: return "'if'";
    case TokenKind::KwElse: return "'else'";
    case TokenKind::KwTrue: return "'true'";
    case TokenKind::KwFalse: return "'false'";
    case TokenKind::KwNot: return "'not'";
    case TokenKind::KwRec: return "'rec'";
    case TokenKind::QualCst: return "'@cst'";
    case TokenKind::QualMut: return "'@mut'";
    case TokenKind::QualOwn: return "'@own'";
    case TokenKind::QualBrw: return "'@brw'";
    case TokenKind::OpAlias: return "'&-'";
    case TokenKind::OpCopy: return "':='";
    case TokenKind::OpMove: return "'<-'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Gt: return "'>'";
    case TokenKind::EqEq: return "'=='";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::Colon: return "':'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Semi: return "';'";
    case TokenKind::End: return "end of input";
    }
    return "?";
}

namespace {

const std::map<std::string, TokenKind>& keywords() {
    static const std::map<std::string, TokenKind> table = {
        {"let", TokenKind::KwLet},       {"fun", TokenKind::KwFun},
        {"new", TokenKind::KwNew},       {"return", TokenKind::KwReturn},
        {"if", TokenKind::KwIf},         {"else", TokenKind::KwElse},
        {"true", TokenKind::KwTrue},     {"false", TokenKind::KwFalse},
        {"not", TokenKind::KwNot},       {"rec", TokenKind::KwRec},
    };
    return table;
}

const std::map<std::string, TokenKind>& qualifiers() {
    static const std::map<std::string, TokenKind> table = {
        {"@cst", TokenKind::QualCst},
        {"@mut", TokenKind::QualMut},
        {"@own", TokenKind::QualOwn},
        {"@brw", TokenKind::QualBrw},
    };
    return table;
}

// Tokens after which a newline ends the statement (Go-style separator
// insertion).
bool ends_statement(TokenKind k) {
    switch (k) {
    case TokenKind::Ident:
    case TokenKind::Int:
    case TokenKind::KwTrue:
    case TokenKind::KwFalse:
    case TokenKind::RParen:
    case TokenKind::RBrace:
        return true;
    default:
        return false;
    }
}

struct Cursor {
    const std::string& src;
    size_t pos = 0;
    uint32_t line = 1;
    uint32_t column = 1;

    bool done() const { return pos >= src.size(); }
    char peek(size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }
    char advance() {
        char c = src[pos++];
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        return c;
    }
    SourceSpan here() const {
        return SourceSpan{static_cast<uint32_t>(pos), static_cast<uint32_t>(pos), line, column};
    }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

} // namespace

std::vector<Token> tokenize(const std::string& source) {
    std::vector<Token> tokens;
    Cursor cur{source};

    auto push = [&tokens](TokenKind kind, std::string text, SourceSpan span, const Cursor& c) {
        span.end_offset = static_cast<uint32_t>(c.pos);
        tokens.push_back(Token{kind, std::move(text), span});
    };

    while (!cur.done()) {
        char c = cur.peek();

        if (c == '\n') {
            if (!tokens.empty() && ends_statement(tokens.back().kind)) {
                SourceSpan span = cur.here();
                cur.advance();
                push(TokenKind::Semi, "\n", span, cur);
            } else {
                cur.advance();
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            cur.advance();
            continue;
        }
        if (c == '/' && cur.peek(1) == '/') {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            continue;
        }

        SourceSpan span = cur.here();

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string text;
            while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
                text += cur.advance();
            }
            push(TokenKind::Int, std::move(text), span, cur);
            continue;
        }
        if (ident_start(c)) {
            std::string text;
            while (!cur.done() && ident_char(cur.peek())) text += cur.advance();
            auto kw = keywords().find(text);
            push(kw == keywords().end() ? TokenKind::Ident : kw->second, std::move(text), span,
                 cur);
            continue;
        }
        if (c == '@') {
            std::string text = "@";
            cur.advance();
            while (!cur.done() && ident_char(cur.peek())) text += cur.advance();
            auto q = qualifiers().find(text);
            if (q == qualifiers().end()) {
                throw StaticError(make_static_diag(StaticErrorKind::LexError, span,
                                                   "unknown qualifier `" + text + "`"));
            }
            push(q->second, std::move(text), span, cur);
            continue;
        }

        // Multi-character operators first (maximal munch).
        auto two = [&cur](char a, char b) { return cur.peek() == a && cur.peek(1) == b; };
        if (two('&', '-')) {
            cur.advance();
            cur.advance();
            push(TokenKind::OpAlias, "&-", span, cur);
            continue;
        }
        if (two(':', '=')) {
            cur.advance();
            cur.advance();
            push(TokenKind::OpCopy, ":=", span, cur);
            continue;
        }
        if (two('<', '-')) {
            cur.advance();
            cur.advance();
            push(TokenKind::OpMove, "<-", span, cur);
            continue;
        }
        if (two('-', '>')) {
            cur.advance();
            cur.advance();
            push(TokenKind::Arrow, "->", span, cur);
            continue;
        }
        if (two('=', '=')) {
            cur.advance();
            cur.advance();
            push(TokenKind::EqEq, "==", span, cur);
            continue;
        }

        TokenKind kind;
        switch (c) {
        case '+': kind = TokenKind::Plus; break;
        case '-': kind = TokenKind::Minus; break;
        case '*': kind = TokenKind::Star; break;
        case '>': kind = TokenKind::Gt; break;
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        case '{': kind = TokenKind::LBrace; break;
        case '}': kind = TokenKind::RBrace; break;
        case ',': kind = TokenKind::Comma; break;
        case ':': kind = TokenKind::Colon; break;
        case '.': kind = TokenKind::Dot; break;
        case ';': kind = TokenKind::Semi; break;
        default:
            throw StaticError(make_static_diag(StaticErrorKind::LexError, span,
                                               std::string("unrecognized character `") + c +
                                                   "`"));
        }
        cur.advance();
        push(kind, std::string(1, c), span, cur);
    }

    tokens.push_back(Token{TokenKind::End, "", cur.here()});
    return tokens;
}

} // namespace azc
