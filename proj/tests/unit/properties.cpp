#include <doctest.h>

#include "cnl2asp/cnl/parser.h"
#include "cnl2asp/rewriter.h"
#include "criteria.h"
#include "support.h"

using namespace cnl2asp;
using testing::Outcome;

namespace {

void require(const Outcome& o) {
    INFO(o.detail);
    CHECK(o.passed);
    CHECK(o.checked > 0);
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("minute ranges enumerate every step") {
    for (std::uint32_t seed : {11u, 12u, 13u}) require(testing::temporal_minutes(seed, 200));
}

TEST_CASE("date ranges count both endpoints") {
    for (std::uint32_t seed : {21u, 22u}) require(testing::temporal_dates(seed, 200));
}

TEST_CASE("with clauses commute") { require(testing::with_permutations(31u, 20)); }

TEST_CASE("emitted rules are safe") { require(testing::rule_safety(41u, 300)); }

TEST_CASE("negate_condition is an involution") { require(testing::negate_involution()); }

TEST_CASE("sampled documents survive both round trips") {
    std::mt19937 rng(51);
    for (int i = 0; i < 200; ++i) {
        auto doc = testing::sample_document(rng);
        CAPTURE(doc.text);
        auto first = cnl::parse_text(doc.text);
        REQUIRE(first.ok());
        REQUIRE(first.propositions.size() == doc.sentences + 6);
        auto second = cnl::parse_text(testing::render_document(first.propositions));
        REQUIRE(second.propositions.size() == first.propositions.size());
        for (std::size_t k = 0; k < first.propositions.size(); ++k)
            CHECK(cnl::dump(first.propositions[k]) == cnl::dump(second.propositions[k]));

        std::string program = compile_source(doc.text).program();
        CHECK(asp::render_program(asp::read_program(program)) == program);
    }
}

}
