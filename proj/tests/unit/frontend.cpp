#include <doctest.h>

#include "cnl2asp/cnl/parser.h"
#include "support.h"

using namespace cnl2asp;
using cnl::TokenKind;

TEST_SUITE("frontend") {

TEST_CASE("tokens keep clock times, dates and quoted strings whole") {
    auto tokens = cnl::tokenize("Alice starts at 07:30 AM on 01/01/2022, \"big room\".");
    std::vector<TokenKind> kinds;
    for (const auto& t : tokens) kinds.push_back(t.kind);
    CHECK(kinds == std::vector<TokenKind>{TokenKind::Word, TokenKind::Word, TokenKind::Word, TokenKind::Time,
                                          TokenKind::Word, TokenKind::Date, TokenKind::Punctuation,
                                          TokenKind::Quoted, TokenKind::Punctuation});
    CHECK(tokens[3].text == "07:30 AM");
    CHECK(tokens[7].text == "\"big room\"");
    CHECK(tokens[5].span.column == 29);
}

TEST_CASE("illegal characters are rejected") {
    try {
        cnl::tokenize("A node @ 3.");
        FAIL("no error");
    } catch (const CompileError& e) {
        CHECK(e.diagnostic().kind == ErrorKind::IllegalCharacter);
        CHECK(e.diagnostic().span.column == 8);
    }
}

TEST_CASE("words are classified by case and shape") {
    using K = cnl::Term::Kind;
    CHECK(cnl::classify_word("X").kind == K::Variable);
    CHECK(cnl::classify_word("PH1").kind == K::Variable);
    CHECK(cnl::classify_word("42").kind == K::NumberValue);
    CHECK(cnl::classify_word("-3").kind == K::NumberValue);
    CHECK(cnl::classify_word("John").kind == K::StringValue);
    CHECK(cnl::classify_word("red").kind == K::StringValue);
    CHECK(cnl::classify_word("maxshift", {"maxshift"}).kind == K::ConstantRef);
}

TEST_CASE("a missing final dot is an unterminated proposition") {
    auto r = cnl::parse_text("A node goes from 1 to 3");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].kind == ErrorKind::UnterminatedProposition);
}

TEST_CASE("parsing resumes after a malformed sentence") {
    auto r = cnl::parse_text("A color is one of a, b.\nA node goes from 1 to 3.\n");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].kind == ErrorKind::SyntaxError);
    CHECK(r.diagnostics[0].span.line == 1);
    REQUIRE(r.propositions.size() == 1);
    CHECK(r.propositions[0].kind == cnl::Proposition::Kind::CompoundDefinition);
}

TEST_CASE("proposition kinds") {
    auto r = cnl::parse_text(
        "A person is identified by a name.\n"
        "A time is a temporal concept expressed in steps ranging from 1 to 3.\n"
        "A node goes from 1 to 3.\n"
        "Every person can work in exactly 1 project.\n"
        "It is prohibited that node X is connected to node X.\n"
        "It is preferred with low priority that the number of nodes that are reachable is maximized.\n");
    REQUIRE(r.ok());
    using K = cnl::Proposition::Kind;
    std::vector<K> kinds;
    for (const auto& p : r.propositions) kinds.push_back(p.kind);
    CHECK(kinds == std::vector<K>{K::DomainDefinition, K::TemporalDefinition, K::CompoundDefinition,
                                  K::QuantifiedChoice, K::NegativeStrongConstraint, K::WeakConstraint});
}

TEST_CASE("rendered corpus documents reparse to the same structure") {
    for (const auto& entry : std::filesystem::directory_iterator(testing::corpus_root())) {
        auto input = entry.path() / "input.cnl";
        if (!std::filesystem::exists(input)) continue;
        CAPTURE(entry.path().filename().string());
        auto first = cnl::parse_text(testing::read_text(input));
        REQUIRE(first.ok());
        auto second = cnl::parse_text(testing::render_document(first.propositions));
        REQUIRE(second.ok());
        REQUIRE(first.propositions.size() == second.propositions.size());
        for (std::size_t i = 0; i < first.propositions.size(); ++i)
            CHECK(cnl::dump(first.propositions[i]) == cnl::dump(second.propositions[i]));
    }
}

}
