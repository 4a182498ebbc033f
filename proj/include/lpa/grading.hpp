#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpa/element.hpp"
#include "lpa/graph.hpp"
#include "lpa/path_analysis.hpp"

namespace lpa {

struct WitnessPair {
    Path alpha;
    Path beta;  // |beta| = |alpha| + 1, r(beta) = r(alpha)
};

/// Witness that v = sum over i of alpha_i beta_i^star beta_i alpha_i^star,
/// with k bounding every |alpha_i| (the emptiness index of the non-turning
/// prefix system; 0 for the one-pair witness of a non-source vertex).
struct TurningDecomposition {
    std::string vertex;
    std::vector<WitnessPair> pairs;
    std::uint64_t k = 0;
};

/// Witness that v = sum over its out-edges f of f f^star.
struct StarWitness {
    std::string vertex;
    std::vector<std::string> edges;
};

enum class Graded { yes, no, unknown };

struct GraphSummary {
    std::string kind;  // "finite" or "ladder"
    int vertices = 0;
    int edges = 0;
    std::string summary;  // ladder one-liner
};

struct VertexWitness {
    std::string vertex;
    std::vector<WitnessPair> pairs;
    std::uint64_t k = 0;
    bool verified = false;
};

struct AnalysisReport {
    GraphSummary graph;
    bool row_finite = true;
    std::vector<std::string> sinks;
    bool sinks_none_certified = false;  // ladder construction certificate
    std::vector<std::string> infinite_emitters;
    YVerdict condition_Y;
    YVerdict condition_Y1;
    Graded strongly_graded = Graded::unknown;
    std::vector<std::string> reasons;
    std::vector<VertexWitness> witnesses;
};

/// v as a sum of ff^star over its out-edges. Throws ObstructionError for
/// sinks (they annihilate every positive-degree element) and for infinite
/// emitters (their star is not summable).
StarWitness vertex_in_S1Sm1(const GraphSpec& g, const std::string& vertex);
bool verify_star_witness(const GraphSpec& g, const StarWitness& w);

/// Membership witness for v in S_{-1} S_1: for a non-source vertex the
/// one-pair form (empty path, least incoming edge); for sources the
/// constructive expansion of decompose_source.
TurningDecomposition vertex_in_Sm1S1(const GraphSpec& g, const std::string& vertex,
                                     int depth_cap = 64);

/// Expands v = sum ff^star along non-turning ranges (least-edge-first,
/// breadth-first) until every branch ends at a turning node, then attaches
/// the one-longer witness path to each branch. Works for any non-sink vertex
/// of a row-finite graph; depth_cap bounds the expansion and a cap hit
/// signals a suspected Condition (Y1) failure.
TurningDecomposition decompose_source(const GraphSpec& g, const std::string& vertex,
                                      int depth_cap = 64);

/// Symbolic check: every pair well-formed with |beta_i| = |alpha_i| + 1 and
/// within the k bound, and v - sum alpha_i beta_i^star beta_i alpha_i^star
/// normal-forms to zero. Ladder decompositions are verified on a window
/// containing every named column.
bool verify_decomposition(const GraphSpec& g, const TurningDecomposition& dec);

/// Full verdict: the three clauses (no sink, row-finite, Condition (Y));
/// for explicit finite graphs with a yes verdict the report also carries
/// engine-verified witnesses for every vertex.
AnalysisReport strong_grading_verdict(const GraphSpec& g);

/// Desk-scale property check of the degree-0 reduction: random homogeneous
/// products across the four sign cases land in the right component, and
/// every short degree-0 basis monomial factors through both vertex-witness
/// routes. Returns false on graphs with a sink.
bool proposition21_reduction_check(const FiniteGraph& g, int sample_size,
                                   std::uint64_t seed = 12345);

nlohmann::ordered_json report_to_json(const AnalysisReport& r);
std::string report_to_text(const AnalysisReport& r);

/// "@v" for the trivial path at v, else the space-joined edge ids.
std::string path_text(const Path& p);

}  // namespace lpa
