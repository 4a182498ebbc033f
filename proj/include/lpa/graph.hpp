#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lpa/errors.hpp"

namespace lpa {

struct Edge {
    std::string id;
    std::string src;
    std::string dst;
    // When set, this edge stands for countably many parallel edges src -> dst
    // and its source vertex is an infinite emitter.
    bool infinite_family = false;

    bool operator==(const Edge&) const = default;
};

struct VertexInfo {
    std::string id;
    // Boundary vertices arise from window truncation of an infinite graph:
    // their edge star is incomplete, so sink/source and CK2 reasoning must
    // not treat them as ordinary vertices.
    bool boundary = false;

    bool operator==(const VertexInfo&) const = default;
};

/// An explicit finite multigraph. Vertices and edges are stored sorted by id,
/// so all index-based iteration (and hence every analysis and export) is
/// deterministic. "Least edge" anywhere in this project means least edge id.
class FiniteGraph {
public:
    FiniteGraph() = default;
    static FiniteGraph build(std::vector<VertexInfo> vertices, std::vector<Edge> edges);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const VertexInfo& vertex(int v) const { return vertices_[static_cast<size_t>(v)]; }
    const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }

    /// Index of a vertex/edge id, or -1 when absent.
    int find_vertex(const std::string& id) const;
    int find_edge(const std::string& id) const;
    /// Like find_*, but throws DomainError when absent.
    int vertex_index(const std::string& id) const;
    int edge_index(const std::string& id) const;

    int edge_src(int e) const { return src_[static_cast<size_t>(e)]; }
    int edge_dst(int e) const { return dst_[static_cast<size_t>(e)]; }

    /// Out-/in-edge indices, sorted (so the first out-edge is the least one).
    const std::vector<int>& out_edges(int v) const { return out_[static_cast<size_t>(v)]; }
    const std::vector<int>& in_edges(int v) const { return in_[static_cast<size_t>(v)]; }

    bool is_sink(int v) const { return out_edges(v).empty(); }
    bool is_source(int v) const { return in_edges(v).empty(); }
    bool is_boundary(int v) const { return vertices_[static_cast<size_t>(v)].boundary; }
    bool is_infinite_emitter(int v) const;

    /// Synthetic member of an infinite edge family, for callers that need to
    /// name individual parallel edges.
    Edge family_member(int e, std::uint64_t index) const;

    bool row_finite() const;
    std::vector<int> sinks() const;
    std::vector<int> infinite_emitters() const;

    bool operator==(const FiniteGraph& other) const {
        return vertices_ == other.vertices_ && edges_ == other.edges_;
    }

private:
    std::vector<VertexInfo> vertices_;
    std::vector<Edge> edges_;
    std::vector<int> src_, dst_;                 // by edge index
    std::vector<std::vector<int>> out_, in_;     // by vertex index
    std::map<std::string, int> vertex_by_id_, edge_by_id_;
};

enum class SpineKind { nat, integers };

/// Columns of the spine that carry a self-loop.
struct LoopPattern {
    enum class Kind { none, all, cols, from };
    Kind kind = Kind::none;
    std::vector<long long> cols;  // Kind::cols; sorted, deduplicated
    long long start = 0;          // Kind::from
    long long step = 1;           // Kind::from, >= 1

    bool operator==(const LoopPattern&) const = default;
};

/// Tails attached at columns start_col + step*t (t = 0, 1, 2, ...), the tail
/// at index t being a directed line of slope*t + offset edges feeding into
/// the spine vertex of that column.
struct TailFamily {
    long long start_col = 0;
    long long step = 1;    // >= 1
    long long slope = 0;   // >= 0
    long long offset = 1;  // >= 1

    bool operator==(const TailFamily&) const = default;
};

struct TailException {
    long long col = 0;
    long long length = 1;  // >= 1

    bool operator==(const TailException&) const = default;
};

/// Description of an infinite "ladder" graph: a one- or two-sided infinite
/// spine u_i -> u_{i+1}, optional self-loops on a column pattern, and finite
/// tails feeding into spine vertices. Explicit tail exceptions override
/// family values at their column; among overlapping families the one declared
/// last wins.
struct LadderSpec {
    SpineKind spine = SpineKind::nat;
    LoopPattern loops;
    std::vector<TailFamily> families;       // declaration order
    std::vector<TailException> exceptions;  // declaration order

    long long min_col() const;  // 0 for nat spines; meaningless for int ones
    bool col_on_spine(long long col) const;

    bool loop_at(long long col) const;
    /// Is there a loop column in [lo, hi] (clipped to the spine)?
    bool loop_in_range(long long lo, long long hi) const;
    bool loops_nonempty() const;
    bool loops_infinite() const;

    /// Resolved tail length at a column (exceptions > later families).
    std::optional<long long> tail_length_at(long long col) const;
    /// All tail columns in [lo, hi], ascending.
    std::vector<long long> tail_columns_in(long long lo, long long hi) const;
    /// Is there a tail column j <= col with length(j) - j >= surplus?
    bool tail_surplus_at_least(long long col, long long surplus) const;
    /// sup over tail columns j of length(j) - j; nullopt when the set of tail
    /// columns is empty, LLONG_MAX stands in for +infinity.
    std::optional<long long> sup_tail_surplus() const;
    /// Least column attaining the (finite) maximal surplus, with that
    /// surplus; nullopt when there are no tail columns or it is unbounded.
    std::optional<std::pair<long long, long long>> argmax_tail_surplus() const;
    /// true iff some family has slope > step (unbounded surplus).
    bool has_steep_family() const;

    bool operator==(const LadderSpec&) const = default;
};

using GraphSpec = std::variant<FiniteGraph, LadderSpec>;

/// Structured id of a ladder vertex: depth 0 is the spine vertex of the
/// column, depth d >= 1 the tail vertex d steps above the spine.
struct LadderVertex {
    long long col = 0;
    long long depth = 0;

    bool operator==(const LadderVertex&) const = default;
    auto operator<=>(const LadderVertex&) const = default;
};

std::string ladder_vertex_name(const LadderVertex& v);
/// Parses names of the shape produced by ladder_vertex_name ("u3", "un2",
/// "t4d1", ...); nullopt when the name is not of that shape.
std::optional<LadderVertex> parse_ladder_vertex(const std::string& name);
/// Checks that the vertex actually exists in the spec (column on the spine,
/// depth within the tail at that column).
bool ladder_vertex_exists(const LadderSpec& g, const LadderVertex& v);

std::string ladder_spine_edge_name(long long col);          // u_col -> u_{col+1}
std::string ladder_loop_edge_name(long long col);           // u_col -> u_col
std::string ladder_tail_edge_name(long long col, long long depth);  // depth d -> d-1

/// Outgoing edges of a ladder vertex as (edge name, target) pairs, sorted by
/// edge name.
std::vector<std::pair<std::string, LadderVertex>> ladder_out_edges(const LadderSpec& g,
                                                                   const LadderVertex& v);
std::vector<std::pair<std::string, LadderVertex>> ladder_in_edges(const LadderSpec& g,
                                                                  const LadderVertex& v);
bool ladder_is_source(const LadderSpec& g, const LadderVertex& v);

/// Parses the .lpg text format. Throws ParseError (with a 1-based line and
/// column for syntax errors).
GraphSpec parse_graph(const std::string& text);

/// Canonical text for a spec; parse_graph(print_graph(g)) == g.
std::string print_graph(const GraphSpec& g);

/// The induced finite subgraph on spine columns 0..cols (nat spine) or
/// -cols..cols (int spine) together with all their loops and tails. The
/// rightmost spine vertex (and, for int spines, the leftmost) is marked as a
/// boundary vertex: a sink (resp. source) of the window only, not of the
/// infinite graph.
FiniteGraph materialize_window(const LadderSpec& g, int cols);

/// DOT text of the graph (ladder specs are windowed to `cols` columns).
/// Output is deterministic; boundary vertices render dashed, infinite edge
/// families render bold with an "inf" label.
std::string export_dot(const GraphSpec& g, int cols = 8);

std::vector<std::string> detect_sinks(const GraphSpec& g);
bool is_row_finite(const GraphSpec& g);

/// Valid identifier: [A-Za-z_][A-Za-z0-9_]*
bool valid_identifier(const std::string& s);

}  // namespace lpa
