#pragma once

#include <cstdint>
#include <string>

namespace cnl2asp::testing {

struct Outcome {
    bool passed = true;
    std::string detail;
    std::size_t checked = 0;
};

/// Random minute ranges with a step dividing the span: fact count and labels against a
/// brute-force enumeration.
Outcome temporal_minutes(std::uint32_t seed, int ranges);
/// Random date ranges of at most three years: fact count against the day difference, labels
/// against timegm/gmtime arithmetic.
Outcome temporal_dates(std::uint32_t seed, int ranges);
/// Every corpus proposition with two or more "with" clauses on a mention, rendered with
/// shuffled clauses, compiles to the same bytes.
Outcome with_permutations(std::uint32_t seed, int permutations);
/// Every statement compiled from the corpus and from sampled documents passes is_safe.
Outcome rule_safety(std::uint32_t seed, int documents);
/// negate_condition applied twice is the identity and never maps an operator to itself.
Outcome negate_involution();

}  // namespace cnl2asp::testing
