#include <doctest.h>

#include "cnl2asp/rewriter.h"
#include "support.h"

using namespace cnl2asp;

namespace {

const std::string nodes = "A node goes from 1 to 3.\n";
const std::string movies = "A movie is identified by an id, and has a title, and a director, and a year.\n";

std::vector<ErrorKind> kinds(const std::string& source) {
    std::vector<ErrorKind> out;
    for (const auto& d : compile_source(source).diagnostics) out.push_back(d.kind);
    return out;
}

ErrorKind only(const std::string& source) {
    auto k = kinds(source);
    REQUIRE(k.size() == 1);
    return k[0];
}

}  // namespace

TEST_SUITE("rewriter") {

TEST_CASE("facts follow declaration order") {
    std::string a = compile_source(movies + "There is a movie with id equal to 1, with director equal to spielberg, "
                                            "with title equal to jurassicPark, with year equal to 1993.")
                        .program();
    std::string b = compile_source(movies + "There is a movie with year equal to 1993, with title equal to "
                                            "jurassicPark, with id equal to 1, with director equal to spielberg.")
                        .program();
    CHECK(a == "movie(1,\"jurassicPark\",\"spielberg\",1993).\n");
    CHECK(a == b);
}

TEST_CASE("choice bounds") {
    std::string src = nodes + "A color is one of red, green.\n";
    std::string atMost = compile_source(src + "Every node can be assigned to at most 1 color.").program();
    CHECK(atMost.find("0 <= {assigned_to(_X1,_X2): color(_,_X2)} <= 1 :- node(_X1).") != std::string::npos);
    std::string exact = compile_source(src + "Every node can be assigned to exactly 1 color.").program();
    CHECK(exact.find("1 <= {assigned_to(_X1,_X2): color(_,_X2)} <= 1 :- node(_X1).") != std::string::npos);
    std::string between = compile_source(src + "Every node can be assigned to between 1 and 2 colors.").program();
    CHECK(between.find("1 <= {assigned_to(_X1,_X2): color(_,_X2)} <= 2") != std::string::npos);
}

TEST_CASE("definitions are processed before the sentences that use them") {
    auto r = compile_source("Every node can be assigned to exactly 1 color.\n" + nodes + "A color is one of red, green.\n");
    CHECK(r.ok());
    auto statements = r.statements();
    REQUIRE(statements.size() == 4);
    CHECK(asp::render(statements[0]).rfind("1 <= {assigned_to", 0) == 0);
    CHECK(asp::render(statements[1]) == "node(1..3).");
}

TEST_CASE("output is deterministic") {
    for (const auto& entry : std::filesystem::directory_iterator(testing::corpus_root())) {
        auto input = entry.path() / "input.cnl";
        if (!std::filesystem::exists(input)) continue;
        std::string text = testing::read_text(input);
        CAPTURE(entry.path().filename().string());
        CHECK(compile_source(text).program() == compile_source(text).program());
    }
}

TEST_CASE("a failing sentence leaves the rest of the program intact") {
    auto r = compile_source(nodes + "Node 1 is connected to node X.\nNode 1 is connected to node 2.\n");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].span.line == 2);
    CHECK(r.program() == "node(1..3).\nconnected_to(1,2).\n");
}

TEST_CASE("parse diagnostics come before semantic ones") {
    auto k = kinds(nodes + "Node 1 is connected to node X.\nA node goes from 1 to 3");
    CHECK(k == std::vector<ErrorKind>{ErrorKind::UnterminatedProposition, ErrorKind::NonGroundFact});
}

TEST_CASE("semantic errors") {
    CHECK(only("A node goes from 5 to 3.") == ErrorKind::EmptyRange);
    CHECK(only(nodes + "Node 1 is connected to node X.") == ErrorKind::NonGroundFact);
    CHECK(only(nodes + "Node 1 is connected to node X, where Y is one of 1, 2.") == ErrorKind::UnboundWhereVariable);
    CHECK(only(nodes + "Node X is connected to node Y, where X is one of 1, 2 and Y is one of respectively 2.") ==
          ErrorKind::LengthMismatch);
    CHECK(only("A shift is one of morning, night and has hours that are equal to respectively 7.") ==
          ErrorKind::LengthMismatch);
    CHECK(only(movies + "There is a movie with id equal to 1.") == ErrorKind::MissingAttribute);
    CHECK(only(movies + "There is a movie with id equal to 1, with rating equal to 3.") == ErrorKind::UnknownAttribute);
    CHECK(only(nodes + "Node 1 is connected to node 2.\nNode 1 is connected to node 2 and node 3.") ==
          ErrorKind::ArityConflict);
    CHECK(only("Every node can be assigned to exactly 1 color.") == ErrorKind::UnknownConcept);
    CHECK(only("A person is identified by a name.\nA project is identified by an id, and has a person.\n"
               "It is required that the total person of a project is at most 3, such that there is a project "
               "with id equal to 1.") == ErrorKind::NonNumericSum);
    CHECK(only(nodes + "It is preferred as much as possible, with low priority, that the number of nodes that are "
                       "reachable is minimized.") == ErrorKind::ConflictingDirections);
    CHECK(only("A movie is identified by an id.\nA topmovie is identified by an id.\nA flop is identified by an id.\n"
               "Whenever there is a movie with id I, then we must have a topmovie with id I, or can have a flop "
               "with id I.") == ErrorKind::MixedModality);
    CHECK(only("A time is a temporal concept expressed in steps ranging from 1 to 3.\n" + nodes +
               "It is required that when node X is chosen for 5 consecutive times then node X is happy.") ==
          ErrorKind::WindowExceedsRange);
    CHECK(only("A timeslot is a temporal concept expressed in minutes ranging from 07:00 AM to 09:00 AM with a "
               "length of 30 minutes.\nAn assignment is identified by an id, and by a timeslot.\n"
               "It is required that the assignment A is after 11:20 AM, whenever there is an assignment A.") ==
          ErrorKind::LabelOutOfRange);
    CHECK(only("A slot is a temporal concept expressed in minutes ranging from 09:00 AM to 10:00 AM with a length "
               "of 25 minutes.") == ErrorKind::MisalignedStep);
    CHECK(only("A movie is identified by an id.\nA movie is identified by an id, and has a title.") ==
          ErrorKind::ConflictingSignature);
}

TEST_CASE("restated modality that agrees is accepted") {
    auto r = compile_source("A movie is identified by an id.\nA topmovie is identified by an id.\n"
                            "A flop is identified by an id.\nWhenever there is a movie with id I, then we must have "
                            "a topmovie with id I, or must have a flop with id I.");
    CHECK(r.ok());
    CHECK(r.program().find("topmovie(I) | flop(I) :- movie(I).") != std::string::npos);
}

TEST_CASE("negated conditions flip every operator") {
    using asp::CmpOp;
    CHECK(negate_condition(CmpOp::Eq) == CmpOp::Ne);
    CHECK(negate_condition(CmpOp::Ne) == CmpOp::Eq);
    CHECK(negate_condition(CmpOp::Lt) == CmpOp::Ge);
    CHECK(negate_condition(CmpOp::Le) == CmpOp::Gt);
    CHECK(negate_condition(CmpOp::Gt) == CmpOp::Le);
    CHECK(negate_condition(CmpOp::Ge) == CmpOp::Lt);
}

}
