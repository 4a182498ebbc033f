#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lpa/eventually_periodic.hpp"
#include "lpa/graph.hpp"

namespace lpa {

/// A finite path: an edge sequence together with its source vertex (which is
/// the whole content for the empty path).
struct Path {
    std::vector<std::string> edges;
    std::string source;

    std::uint64_t length() const { return edges.size(); }
    bool trivial() const { return edges.empty(); }

    bool operator==(const Path&) const = default;
    auto operator<=>(const Path&) const = default;
};

Path trivial_path(const std::string& vertex);

bool path_valid(const GraphSpec& g, const Path& p);
/// Range vertex of a valid path; throws DomainError on invalid paths.
std::string path_range(const GraphSpec& g, const Path& p);

/// Endpoints of a ladder edge given by its canonical name ("s3", "l2",
/// "t4e1", ...); nullopt if the name does not denote an edge of the spec.
std::optional<std::pair<LadderVertex, LadderVertex>> ladder_edge_endpoints(
    const LadderSpec& g, const std::string& edge);

/// The set { l >= 1 : some path of length l in g ends at v }, computed by
/// iterating the boolean "reachable-by-length-l" vector over all vertices and
/// detecting the cycle of the vector orbit.
EventuallyPeriodicSet in_path_lengths(const FiniteGraph& g, const std::string& vertex);
/// Same, for every vertex at once (one orbit computation).
std::vector<EventuallyPeriodicSet> in_path_lengths_all(const FiniteGraph& g);

/// Uniform read-only view used by prefix-walk algorithms; explicit for finite
/// graphs, analytic for ladder specs.
class WalkView {
public:
    explicit WalkView(const GraphSpec& g);

    bool has_vertex(const std::string& v) const;
    bool is_source(const std::string& v) const;
    bool is_sink(const std::string& v) const;           // never true on ladders
    bool is_infinite_emitter(const std::string& v) const;
    /// (edge id, target vertex), sorted by edge id.
    std::vector<std::pair<std::string, std::string>> out_edges(const std::string& v) const;
    std::vector<std::pair<std::string, std::string>> in_edges(const std::string& v) const;
    /// Is len a member of the in-path length set of v? (len >= 1)
    bool in_path_length_member(const std::string& v, std::uint64_t len) const;
    /// Would a path of length path_len ending at v have a one-longer
    /// companion ending there too?
    bool is_turning(std::uint64_t path_len, const std::string& v) const {
        return in_path_length_member(v, path_len + 1);
    }

    const GraphSpec& spec() const { return *g_; }

private:
    const GraphSpec* g_;
    mutable std::shared_ptr<std::vector<EventuallyPeriodicSet>> finite_sets_;
    const std::vector<EventuallyPeriodicSet>& finite_lengths() const;
};

/// r(alpha) is a turning node for a nonempty path alpha when some path one
/// edge longer than alpha also ends at r(alpha).
bool is_turning_node(const GraphSpec& g, const Path& alpha);

/// Some path beta with r(beta) = r(alpha) and |beta| = |alpha| + k, if one
/// exists. Deterministic: for finite graphs the lexicographically least edge
/// sequence; for ladder specs the canonical choice (spine origin, then the
/// least tail column, then the least loop column).
std::optional<Path> find_turning_witness(const GraphSpec& g, const Path& alpha, std::uint64_t k);

enum class YStatus { holds, fails, unknown };
enum class YReason { finite_graph_theorem, cycle_cover, ladder_criterion, counterexample };

/// A failing instance: an infinite path described by its start vertex plus a
/// generator tag, and the offset k for which no prefix has a witness.
struct YCounterexample {
    std::string start_vertex;
    std::string tag;  // "follow-spine" or "loop-forever"
    std::uint64_t k = 0;
};

struct YVerdict {
    YStatus status = YStatus::unknown;
    YReason reason = YReason::counterexample;
    std::string detail;  // refines ladder_criterion / cycle_cover
    std::optional<YCounterexample> counterexample;

    /// Short machine-readable reason: finite-graph-theorem, cycle-cover,
    /// int-spine, slope-criterion, loop-columns, counterexample.
    std::string reason_label() const;
};

YVerdict check_condition_Y(const GraphSpec& g);
YVerdict check_condition_Y1(const GraphSpec& g);

/// A length-N path from start all of whose nonempty prefixes end at
/// non-turning nodes, if one exists (the least such path). Built through the
/// koenig level system of non-turning extensions.
std::optional<Path> refute_Y1_bounded(const GraphSpec& g, const std::string& start, int depth);

/// Certifies that every vertex outside the set of cycle-based vertices lies
/// in an acyclic region, so every infinite path must meet a cycle base.
/// True for every finite graph; exposed for the independent check.
bool cycle_cover_certificate(const FiniteGraph& g);

}  // namespace lpa
