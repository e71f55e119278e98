#include "doctest.h"

#include "azc/lexer.hpp"

using namespace azc;

TEST_CASE("copy assignment tokenizes into ident, operator, literal") {
    auto tokens = tokenize("a := 10");
    REQUIRE(tokens.size() == 4); // + End
    CHECK(tokens[0].kind == TokenKind::Ident);
    CHECK(tokens[0].text == "a");
    CHECK(tokens[1].kind == TokenKind::OpCopy);
    CHECK(tokens[2].kind == TokenKind::Int);
    CHECK(tokens[2].text == "10");
    CHECK(tokens[3].kind == TokenKind::End);
}

TEST_CASE("alias operator is one token") {
    auto tokens = tokenize("c &- a");
    REQUIRE(tokens.size() == 4);
    CHECK(tokens[0].text == "c");
    CHECK(tokens[1].kind == TokenKind::OpAlias);
    CHECK(tokens[2].text == "a");
}

TEST_CASE("unrecognized character reports its position") {
    try {
        tokenize("b ? 20");
        FAIL("expected a lex error");
    } catch (const StaticError& e) {
        CHECK(e.diag.code == "S-LEX");
        CHECK(e.diag.span.line == 1);
        CHECK(e.diag.span.column == 3);
    }
}

TEST_CASE("move and arrow disambiguate") {
    auto tokens = tokenize("a <- 1 - 2 -> x");
    CHECK(tokens[1].kind == TokenKind::OpMove);
    CHECK(tokens[3].kind == TokenKind::Minus);
    CHECK(tokens[5].kind == TokenKind::Arrow);
}

TEST_CASE("qualifiers and keywords") {
    auto tokens = tokenize("let x: @mut @own Int { true }");
    CHECK(tokens[0].kind == TokenKind::KwLet);
    CHECK(tokens[3].kind == TokenKind::QualMut);
    CHECK(tokens[4].kind == TokenKind::QualOwn);
    CHECK(tokens[7].kind == TokenKind::KwTrue);
}

TEST_CASE("newline after a statement-ending token acts as a separator") {
    auto tokens = tokenize("a := 10\nb <- 20");
    bool saw_semi = false;
    for (const auto& t : tokens) saw_semi = saw_semi || t.kind == TokenKind::Semi;
    CHECK(saw_semi);

    // ...but not after an operator, where the statement is still open.
    auto cont = tokenize("a :=\n10");
    for (const auto& t : cont) CHECK(t.kind != TokenKind::Semi);
}

TEST_CASE("comments run to end of line") {
    auto tokens = tokenize("a := 10 // `a` gets unique\n");
    REQUIRE(tokens.size() == 5); // a, :=, 10, newline separator, End
    CHECK(tokens[2].kind == TokenKind::Int);
    CHECK(tokens[3].kind == TokenKind::Semi);
}

TEST_CASE("spans carry line and column") {
    auto tokens = tokenize("a := 1\nbb := 2");
    CHECK(tokens[4].text == "bb");
    CHECK(tokens[4].span.line == 2);
    CHECK(tokens[4].span.column == 1);
}
