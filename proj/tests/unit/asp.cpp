#include <doctest.h>

#include "cnl2asp/asp/ast.h"
#include "cnl2asp/cli.h"
#include "cnl2asp/rewriter.h"
#include "support.h"

using namespace cnl2asp;
using asp::CmpOp;

namespace {

asp::Statement one(const std::string& text) {
    auto program = asp::read_program(text);
    REQUIRE(program.size() == 1);
    return program[0];
}

std::vector<std::string> unbound(const std::string& text) { return asp::is_safe(one(text)).unbound; }

}  // namespace

TEST_SUITE("asp") {

TEST_CASE("terms render in clingo syntax") {
    using asp::Term;
    CHECK(asp::render(Term::range(Term::num(1), Term::var("N"))) == "1..N");
    CHECK(asp::render(Term::mod(Term::arith("+", Term::var("A"), Term::num(90)), 360)) ==
          "(A+90)\\360");
    CHECK(asp::render(Term::abs(Term::arith("-", Term::var("A"), Term::var("B")))) == "|A-B|");
    CHECK(asp::render(Term::str("x y")) == "\"x y\"");
    CHECK(asp::render(Term::gen(3)) == "_X3");
    CHECK(asp::render(Term::func("time", {Term::anon()})) == "time(_)");
}

TEST_CASE("comparison operators: negation and mirroring are involutions") {
    for (CmpOp op : {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge}) {
        CAPTURE(asp::cmp_text(op));
        CHECK(asp::negate(asp::negate(op)) == op);
        CHECK(asp::mirror(asp::mirror(op)) == op);
        CHECK(asp::negate(op) != op);
    }
    CHECK(asp::negate(CmpOp::Lt) == CmpOp::Ge);
    CHECK(asp::mirror(CmpOp::Lt) == CmpOp::Gt);
    CHECK(asp::mirror(CmpOp::Eq) == CmpOp::Eq);
}

TEST_CASE("safe rules") {
    CHECK(asp::is_safe(one("a(X) :- b(X).")).safe);
    CHECK(asp::is_safe(one("a(Y) :- b(X), Y = X+1.")).safe);
    CHECK(asp::is_safe(one(":- #count{X: p(X,Y)} > 1, q(Y).")).safe);
    CHECK(asp::is_safe(one("{a(X): b(X)} :- c.")).safe);
    CHECK(asp::is_safe(one("a(1..3).")).safe);
    CHECK(asp::is_safe(one(":~ p(X,C). [C@1,X]")).safe);
}

TEST_CASE("unsafe rules name the offending variables") {
    CHECK(unbound("a(X) :- not b(X).") == std::vector<std::string>{"X"});
    CHECK(unbound("a(X) :- X < 3.") == std::vector<std::string>{"X"});
    CHECK(unbound("{a(X,Y): b(X)} :- c.") == std::vector<std::string>{"Y"});
    CHECK(unbound(":- #count{X: p(X), Z > 1} > 1.") == std::vector<std::string>{"Z"});
    CHECK(unbound(":~ p(X). [Y@1,X]") == std::vector<std::string>{"Y"});
}

TEST_CASE("reading rendered programs is lossless") {
    for (const auto& entry : std::filesystem::directory_iterator(testing::corpus_root())) {
        auto dir = entry.path();
        if (!std::filesystem::exists(dir / "expected.lp")) continue;
        CAPTURE(dir.filename().string());
        auto cases = cli::load_corpus(dir.parent_path());
        auto it = std::find_if(cases.begin(), cases.end(), [&](const auto& c) { return c.name == dir.filename(); });
        REQUIRE(it != cases.end());
        std::string expected = cli::apply_ledger(testing::read_text(dir / "expected.lp"), it->exceptions);
        std::string rendered = asp::render_program(asp::read_program(expected));
        CHECK(asp::render_program(asp::read_program(rendered)) == rendered);
        CHECK(cli::normalize_program(rendered, it->alpha) == cli::normalize_program(expected, it->alpha));

        std::string compiled = compile_source(testing::read_text(dir / "input.cnl")).program();
        CHECK(asp::render_program(asp::read_program(compiled)) == compiled);
    }
}

TEST_CASE("malformed programs are rejected") {
    CHECK_THROWS(asp::read_program("a(X :- b."));
    CHECK_THROWS(asp::read_program("a(X) :- b(X)"));
}

}
