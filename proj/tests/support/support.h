#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cnl2asp/cnl/ast.h"

namespace cnl2asp::testing {

std::filesystem::path corpus_root();
std::string read_text(const std::filesystem::path& p);

/// A random document drawn from sentence templates over a fixed vocabulary.
struct SampledDocument {
    std::string text;
    std::size_t sentences = 0;  // sentences after the fixed definitions
};
SampledDocument sample_document(std::mt19937& rng);

void for_each_mention(cnl::Proposition& p, const std::function<void(cnl::Mention&)>& fn);
/// Number of mentions with at least two "with" attribute clauses.
std::size_t permutable_mentions(cnl::Proposition p);
/// Shuffles the "with" clauses of every mention.
void shuffle_with_clauses(cnl::Proposition& p, std::mt19937& rng);

/// Canonical text of a whole document, one proposition per line.
std::string render_document(const std::vector<cnl::Proposition>& props);

}  // namespace cnl2asp::testing
