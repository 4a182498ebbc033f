#pragma once

#include <string>
#include <vector>

#include "lpa/graph.hpp"

namespace lpa {

/// A built-in graph with its known Condition (Y) verdict. Entries A..K are
/// the infinite ladder examples; the remaining entries are finite fixtures
/// (every finite graph satisfies Condition (Y)).
struct CorpusEntry {
    std::string name;
    std::string lpg_text;
    bool expected_Y = true;
};

const std::vector<CorpusEntry>& builtin_corpus();

/// Parsed graph of a corpus entry; throws DomainError for unknown names.
GraphSpec corpus_graph(const std::string& name);

}  // namespace lpa
