#include <doctest.h>

#include <ctime>

#include "cnl2asp/registry.h"
#include "cnl2asp/rewriter.h"

using namespace cnl2asp;
using asp::Term;

namespace {

long days_since_epoch(int day, int month, int year) {
    std::tm tm{};
    tm.tm_mday = day;
    tm.tm_mon = month - 1;
    tm.tm_year = year - 1900;
    return static_cast<long>(timegm(&tm) / 86400);
}

cnl::DomainDefinition domain(cnl::Words name, std::vector<cnl::Words> keys, std::vector<cnl::Words> params) {
    return cnl::DomainDefinition{std::move(name), std::move(keys), std::move(params)};
}

ErrorKind kind_of_temporal(const std::string& unit, const std::string& start, const std::string& end,
                           std::optional<long> length = std::nullopt) {
    Registry reg;
    try {
        reg.register_temporal(cnl::TemporalDefinition{{"slot"}, unit, start, end, length, "minutes"});
    } catch (const CompileError& e) {
        return e.diagnostic().kind;
    }
    FAIL("no error");
    return ErrorKind::SyntaxError;
}

}  // namespace

TEST_SUITE("registry") {

TEST_CASE("clock times") {
    CHECK(parse_clock("00:00 AM") == 0);
    CHECK(parse_clock("12:00 AM") == 0);
    CHECK(parse_clock("12:30 PM") == 750);
    CHECK(parse_clock("07:15 PM") == 19 * 60 + 15);
    CHECK(parse_clock("23:59") == 1439);
    CHECK(format_clock(19 * 60 + 5) == "19:05");
    CHECK_THROWS_AS(parse_clock("25:00"), CompileError);
    CHECK_THROWS_AS(parse_clock("13:00 PM"), CompileError);
}

TEST_CASE("dates agree with timegm") {
    for (auto [d, m, y] : {std::tuple{1, 1, 1970}, {29, 2, 2024}, {31, 12, 1999}, {1, 3, 2100}, {15, 6, 2022}}) {
        CAPTURE(d);
        CAPTURE(m);
        CAPTURE(y);
        char text[16];
        std::snprintf(text, sizeof text, "%02d/%02d/%04d", d, m, y);
        CHECK(parse_date(text) == days_since_epoch(d, m, y));
        CHECK(format_date(days_since_epoch(d, m, y)) == text);
    }
    CHECK_THROWS_AS(parse_date("30/02/2022"), CompileError);
}

TEST_CASE("temporal concepts enumerate labels") {
    Registry reg;
    auto [t, facts] = reg.register_temporal(cnl::TemporalDefinition{{"shift"}, "minutes", "10:00 PM", "11:00 PM", 20, "minutes"});
    REQUIRE(facts.size() == 3);
    CHECK(asp::render(facts[2]) == "shift(3,\"22:40\").");
    CHECK(t.index_of("22:20") == 2);
    CHECK_FALSE(t.index_of("22:10"));
    CHECK_THROWS_AS(t.label_of(4), std::out_of_range);

    auto [steps, stepFacts] = reg.register_temporal(cnl::TemporalDefinition{{"time"}, "steps", "0", "4", {}, ""});
    CHECK(stepFacts.size() == 5);
    CHECK(asp::render(stepFacts[0]) == "time(1).");
    CHECK(reg.temporal_for_unit("times") == reg.temporal("time"));
    CHECK(reg.temporal_of_kind(TemporalConcept::Kind::Minutes) == reg.temporal("shift"));
}

TEST_CASE("temporal range errors") {
    CHECK(kind_of_temporal("minutes", "09:00 AM", "09:00 AM") == ErrorKind::EmptyRange);
    CHECK(kind_of_temporal("minutes", "10:00 AM", "09:00 AM") == ErrorKind::EmptyRange);
    CHECK(kind_of_temporal("minutes", "09:00 AM", "10:00 AM", 25) == ErrorKind::MisalignedStep);
    CHECK(kind_of_temporal("days", "02/01/2022", "01/01/2022") == ErrorKind::EmptyRange);
}

TEST_CASE("verb phrases become predicates") {
    CHECK(Registry::normalize_verb({"works", "in"}) == "work_in");
    CHECK(Registry::normalize_verb({"is", "connected", "to"}) == "connected_to");
    CHECK(Registry::normalize_verb({"is", "assigned", "to"}) == "assigned_to");
    CHECK(Registry::normalize_verb({"are", "reachable"}) == "reachable");
    CHECK(Registry::predicate_name("position in") == "position_in");
}

TEST_CASE("signatures place attributes by declaration") {
    Registry reg;
    reg.register_domain(domain({"patient"}, {{"id"}}, {}));
    reg.register_domain(domain({"movie"}, {{"id"}}, {{"title"}, {"director"}, {"year"}}));
    CHECK(asp::render(reg.signature_of("movie", {{"year", Term::num(1964)}, {"id", Term::num(1)}})) ==
          "movie(1,_,_,1964)");
    CHECK_THROWS_AS(reg.signature_of("movie", {{"rating", Term::num(1)}}), CompileError);
    CHECK_THROWS_AS(reg.signature_of("film", {}), CompileError);

    const ConceptSignature& r = reg.register_domain(domain({"registration"}, {{"patient"}, {"order"}}, {{"date"}}));
    CHECK(r.attribute(0).reference == "patient");
    CHECK_FALSE(r.attribute(1).is_reference());
    CHECK(asp::render(reg.signature_of("registration", {{"patient", Term::var("P")}})) ==
          "registration(patient(P),_,_)");
    CHECK(asp::render(reg.signature_of("registration", {})) == "registration(patient(_),_,_)");
}

TEST_CASE("redefining a concept differently conflicts") {
    Registry reg;
    reg.register_domain(domain({"movie"}, {{"id"}}, {{"title"}}));
    CHECK_NOTHROW(reg.register_domain(domain({"movie"}, {{"id"}}, {{"title"}})));
    try {
        reg.register_domain(domain({"movie"}, {{"id"}}, {{"year"}}));
        FAIL("no error");
    } catch (const CompileError& e) {
        CHECK(e.diagnostic().kind == ErrorKind::ConflictingSignature);
    }
}

TEST_CASE("constants") {
    Registry reg;
    reg.register_constant(cnl::ConstantDefinition{"maxshift", cnl::Term{cnl::Term::Kind::NumberValue, "8"}, false});
    reg.register_constant(cnl::ConstantDefinition{"horizon", std::nullopt, false});
    CHECK(reg.is_constant("horizon"));
    CHECK(asp::render(*reg.resolve_constant("maxshift")) == "8");
    CHECK(asp::render(*reg.resolve_constant("horizon")) == "horizon");
    CHECK_FALSE(reg.resolve_constant("other"));
    CHECK(reg.unbound_constants() == std::vector<std::string>{"horizon"});
}

TEST_CASE("verb signatures keep their arity") {
    Registry reg;
    reg.ensure_verb("assigned_to", "node", {"color"});
    CHECK(reg.verb("assigned_to")->arity() == 2);
    CHECK_THROWS_AS(reg.ensure_verb("assigned_to", "node", {"color", "time"}), CompileError);
}

}
