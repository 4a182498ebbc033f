#include "lpa/corpus.hpp"

namespace lpa {

// The ladder encodings of the built-in infinite graphs. Loop patterns and
// tail families follow the figures they reproduce: loops on every column
// (A), loops on every other column (B), a two-sided spine (C), tails whose
// length grows faster than their column (D..G), and spines whose tails grow
// too slowly or not at all (H..K).
const std::vector<CorpusEntry>& builtin_corpus() {
    static const std::vector<CorpusEntry> corpus = {
        {"A", "ladder { spine nat; loops all; }\n", true},
        {"B", "ladder { spine nat; loops from 1 step 2; }\n", true},
        {"C", "ladder { spine int; }\n", true},
        {"D", "ladder { spine nat; tail start 1 step 1 length 2*t+2; }\n", true},
        {"E", "ladder { spine nat; tail start 1 step 2 length 3*t+2; }\n", true},
        {"F", "ladder { spine nat; tail start 0 step 1 length 2*t+1; }\n", true},
        {"G", "ladder { spine nat; tail start 0 step 2 length 3*t+1; }\n", true},
        {"H", "ladder { spine nat; }\n", false},
        {"I", "ladder { spine nat; tail start 1 step 1 length 1*t+1; }\n", false},
        {"J", "ladder { spine nat; tail start 1 step 2 length 2*t+1; }\n", false},
        {"K", "ladder { spine nat; tail start 2 step 2 length 2*t+2; }\n", false},
        {"rose", "vertex v;\nedge e: v -> v;\n", true},
        {"twocycle", "vertex u;\nvertex v;\nedge a: u -> v;\nedge b: v -> u;\n", true},
        {"line3", "vertex v0;\nvertex v1;\nvertex v2;\nedge e0: v0 -> v1;\nedge e1: v1 -> v2;\n",
         true},
    };
    return corpus;
}

GraphSpec corpus_graph(const std::string& name) {
    for (const auto& entry : builtin_corpus())
        if (entry.name == name) return parse_graph(entry.lpg_text);
    throw DomainError("unknown corpus entry '" + name + "'");
}

}  // namespace lpa
