#include "lpa/path_analysis.hpp"

#include <algorithm>
#include <climits>
#include <map>

#include "lpa/koenig.hpp"

namespace lpa {

Path trivial_path(const std::string& vertex) { return Path{{}, vertex}; }

std::optional<std::pair<LadderVertex, LadderVertex>> ladder_edge_endpoints(
    const LadderSpec& g, const std::string& edge) {
    if (edge.empty()) return std::nullopt;
    auto parse_tagged = [](const std::string& s, size_t& i, long long& out) {
        bool neg = false;
        if (i < s.size() && s[i] == 'n') {
            neg = true;
            ++i;
        }
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) return false;
        out = std::stoll(s.substr(start, i - start));
        if (neg) out = -out;
        return true;
    };
    size_t i = 1;
    long long col = 0;
    if (edge[0] == 's') {
        if (!parse_tagged(edge, i, col) || i != edge.size()) return std::nullopt;
        if (!g.col_on_spine(col) || !g.col_on_spine(col + 1)) return std::nullopt;
        return std::make_pair(LadderVertex{col, 0}, LadderVertex{col + 1, 0});
    }
    if (edge[0] == 'l') {
        if (!parse_tagged(edge, i, col) || i != edge.size()) return std::nullopt;
        if (!g.loop_at(col)) return std::nullopt;
        return std::make_pair(LadderVertex{col, 0}, LadderVertex{col, 0});
    }
    if (edge[0] == 't') {
        if (!parse_tagged(edge, i, col)) return std::nullopt;
        if (i >= edge.size() || edge[i] != 'e') return std::nullopt;
        ++i;
        long long depth = 0;
        if (!parse_tagged(edge, i, depth) || i != edge.size()) return std::nullopt;
        auto len = g.tail_length_at(col);
        if (!len || depth < 1 || depth > *len) return std::nullopt;
        return std::make_pair(LadderVertex{col, depth}, LadderVertex{col, depth - 1});
    }
    return std::nullopt;
}

namespace {

bool finite_path_valid(const FiniteGraph& g, const Path& p, std::string* range_out) {
    int v = g.find_vertex(p.source);
    if (v < 0) return false;
    int cur = v;
    for (const auto& eid : p.edges) {
        int e = g.find_edge(eid);
        if (e < 0 || g.edge_src(e) != cur) return false;
        cur = g.edge_dst(e);
    }
    if (range_out) *range_out = g.vertex(cur).id;
    return true;
}

bool ladder_path_valid(const LadderSpec& g, const Path& p, std::string* range_out) {
    auto v = parse_ladder_vertex(p.source);
    if (!v || !ladder_vertex_exists(g, *v)) return false;
    LadderVertex cur = *v;
    for (const auto& eid : p.edges) {
        auto ends = ladder_edge_endpoints(g, eid);
        if (!ends || !(ends->first == cur)) return false;
        cur = ends->second;
    }
    if (range_out) *range_out = ladder_vertex_name(cur);
    return true;
}

}  // namespace

bool path_valid(const GraphSpec& g, const Path& p) {
    if (const auto* fg = std::get_if<FiniteGraph>(&g)) return finite_path_valid(*fg, p, nullptr);
    return ladder_path_valid(std::get<LadderSpec>(g), p, nullptr);
}

std::string path_range(const GraphSpec& g, const Path& p) {
    std::string range;
    bool ok = false;
    if (const auto* fg = std::get_if<FiniteGraph>(&g))
        ok = finite_path_valid(*fg, p, &range);
    else
        ok = ladder_path_valid(std::get<LadderSpec>(g), p, &range);
    if (!ok) throw DomainError("invalid path");
    return range;
}

std::vector<EventuallyPeriodicSet> in_path_lengths_all(const FiniteGraph& g) {
    const size_t n = static_cast<size_t>(g.vertex_count());
    // b_l[w] = "some path of length l ends at w"; b_0 is all-true (trivial
    // paths). The orbit of this vector is eventually periodic; 2^16 states is
    // the hard cap from the design budget.
    std::vector<std::vector<bool>> states;
    std::map<std::vector<bool>, size_t> seen;
    std::vector<bool> cur(n, true);
    size_t rho = 0, pi = 0;
    for (size_t iter = 0;; ++iter) {
        if (iter > (1u << 16)) throw CapError("in-path length orbit exceeded 2^16 states");
        auto it = seen.find(cur);
        if (it != seen.end()) {
            rho = it->second;
            pi = states.size() - rho;
            break;
        }
        seen.emplace(cur, states.size());
        states.push_back(cur);
        std::vector<bool> next(n, false);
        for (int e = 0; e < g.edge_count(); ++e)
            if (cur[static_cast<size_t>(g.edge_src(e))])
                next[static_cast<size_t>(g.edge_dst(e))] = true;
        cur = std::move(next);
    }
    auto state_at = [&](size_t l) -> const std::vector<bool>& {
        if (l < states.size()) return states[l];
        return states[rho + (l - rho) % pi];
    };
    std::vector<EventuallyPeriodicSet> out;
    out.reserve(n);
    const size_t tail_start = std::max<size_t>(rho, 1);  // length 0 is excluded
    for (size_t v = 0; v < n; ++v) {
        std::vector<bool> bits(tail_start + pi, false);
        for (size_t l = 1; l < bits.size(); ++l) bits[l] = state_at(l)[v];
        out.push_back(EventuallyPeriodicSet::from_orbit(bits, tail_start, pi));
    }
    return out;
}

EventuallyPeriodicSet in_path_lengths(const FiniteGraph& g, const std::string& vertex) {
    int v = g.vertex_index(vertex);
    return in_path_lengths_all(g)[static_cast<size_t>(v)];
}

namespace {

// Membership of len in the in-path length set of a ladder vertex, from the
// closed form: tail vertices see only the tail above them; a spine vertex u_c
// sees every length <= c (nat) or every length (int spine), and for len > c
// additionally anything a loop column <= c provides (everything) or a tail
// column j <= c with surplus length(j) - j >= len - c provides.
bool ladder_in_len_member(const LadderSpec& g, const LadderVertex& v, std::uint64_t len) {
    if (len == 0) return false;
    if (v.depth > 0) {
        long long avail = *g.tail_length_at(v.col) - v.depth;
        return avail > 0 && len <= static_cast<std::uint64_t>(avail);
    }
    if (g.spine == SpineKind::integers) return true;
    if (v.col > 0 && len <= static_cast<std::uint64_t>(v.col)) return true;
    if (g.loop_in_range(0, v.col)) return true;
    long long over = static_cast<long long>(len) - v.col;
    return g.tail_surplus_at_least(v.col, over);
}

}  // namespace

WalkView::WalkView(const GraphSpec& g) : g_(&g) {}

const std::vector<EventuallyPeriodicSet>& WalkView::finite_lengths() const {
    if (!finite_sets_)
        finite_sets_ = std::make_shared<std::vector<EventuallyPeriodicSet>>(
            in_path_lengths_all(std::get<FiniteGraph>(*g_)));
    return *finite_sets_;
}

bool WalkView::has_vertex(const std::string& v) const {
    if (const auto* fg = std::get_if<FiniteGraph>(g_)) return fg->find_vertex(v) >= 0;
    auto lv = parse_ladder_vertex(v);
    return lv && ladder_vertex_exists(std::get<LadderSpec>(*g_), *lv);
}

bool WalkView::is_source(const std::string& v) const {
    if (const auto* fg = std::get_if<FiniteGraph>(g_)) return fg->is_source(fg->vertex_index(v));
    auto lv = parse_ladder_vertex(v);
    if (!lv || !ladder_vertex_exists(std::get<LadderSpec>(*g_), *lv))
        throw DomainError("unknown vertex '" + v + "'");
    return ladder_is_source(std::get<LadderSpec>(*g_), *lv);
}

bool WalkView::is_sink(const std::string& v) const {
    if (const auto* fg = std::get_if<FiniteGraph>(g_)) return fg->is_sink(fg->vertex_index(v));
    if (!has_vertex(v)) throw DomainError("unknown vertex '" + v + "'");
    return false;
}

bool WalkView::is_infinite_emitter(const std::string& v) const {
    if (const auto* fg = std::get_if<FiniteGraph>(g_))
        return fg->is_infinite_emitter(fg->vertex_index(v));
    if (!has_vertex(v)) throw DomainError("unknown vertex '" + v + "'");
    return false;
}

std::vector<std::pair<std::string, std::string>> WalkView::out_edges(const std::string& v) const {
    std::vector<std::pair<std::string, std::string>> out;
    if (const auto* fg = std::get_if<FiniteGraph>(g_)) {
        for (int e : fg->out_edges(fg->vertex_index(v)))
            out.emplace_back(fg->edge(e).id, fg->vertex(fg->edge_dst(e)).id);
        return out;  // already sorted by edge id
    }
    auto lv = parse_ladder_vertex(v);
    if (!lv) throw DomainError("unknown vertex '" + v + "'");
    for (auto& [eid, target] : ladder_out_edges(std::get<LadderSpec>(*g_), *lv))
        out.emplace_back(eid, ladder_vertex_name(target));
    return out;
}

std::vector<std::pair<std::string, std::string>> WalkView::in_edges(const std::string& v) const {
    std::vector<std::pair<std::string, std::string>> in;
    if (const auto* fg = std::get_if<FiniteGraph>(g_)) {
        for (int e : fg->in_edges(fg->vertex_index(v)))
            in.emplace_back(fg->edge(e).id, fg->vertex(fg->edge_src(e)).id);
        return in;
    }
    auto lv = parse_ladder_vertex(v);
    if (!lv) throw DomainError("unknown vertex '" + v + "'");
    for (auto& [eid, src] : ladder_in_edges(std::get<LadderSpec>(*g_), *lv))
        in.emplace_back(eid, ladder_vertex_name(src));
    return in;
}

bool WalkView::in_path_length_member(const std::string& v, std::uint64_t len) const {
    if (const auto* fg = std::get_if<FiniteGraph>(g_))
        return finite_lengths()[static_cast<size_t>(fg->vertex_index(v))].contains(len);
    auto lv = parse_ladder_vertex(v);
    if (!lv || !ladder_vertex_exists(std::get<LadderSpec>(*g_), *lv))
        throw DomainError("unknown vertex '" + v + "'");
    return ladder_in_len_member(std::get<LadderSpec>(*g_), *lv, len);
}

bool is_turning_node(const GraphSpec& g, const Path& alpha) {
    if (alpha.trivial()) throw DomainError("turning nodes are defined for nonempty paths");
    if (!path_valid(g, alpha)) throw DomainError("invalid path");
    WalkView view(g);
    return view.is_turning(alpha.length(), path_range(g, alpha));
}

namespace {

// Lexicographically least path of length len ending at the target vertex of
// a finite graph, if any.
std::optional<Path> finite_witness(const FiniteGraph& g, int target, std::uint64_t len) {
    const size_t n = static_cast<size_t>(g.vertex_count());
    // can[j][w]: a path of length j from w to target exists. Lengths can be
    // large through cycles, so fall back to the periodic structure: cap the
    // table at a horizon where the reachability vectors cycle.
    std::vector<std::vector<bool>> can;
    can.emplace_back(n, false);
    can[0][static_cast<size_t>(target)] = true;
    std::map<std::vector<bool>, size_t> seen{{can[0], 0}};
    size_t rho = 0, pi = 0;
    bool cycled = false;
    for (size_t j = 1; j <= len; ++j) {
        std::vector<bool> next(n, false);
        for (int e = 0; e < g.edge_count(); ++e)
            if (can[j - 1][static_cast<size_t>(g.edge_dst(e))])
                next[static_cast<size_t>(g.edge_src(e))] = true;
        auto it = seen.find(next);
        if (it != seen.end()) {
            rho = it->second;
            pi = can.size() - rho;
            cycled = true;
            break;
        }
        seen.emplace(next, can.size());
        can.push_back(std::move(next));
    }
    auto can_at = [&](std::uint64_t j, size_t w) -> bool {
        if (j < can.size()) return can[j][w];
        if (!cycled) return false;
        return can[rho + static_cast<size_t>((j - rho) % pi)][w];
    };
    bool feasible = false;
    for (size_t w = 0; w < n && !feasible; ++w) feasible = can_at(len, w);
    if (!feasible) return std::nullopt;
    Path p;
    std::uint64_t remaining = len;
    int cur = -1;
    while (remaining > 0) {
        int chosen = -1;
        for (int e = 0; e < g.edge_count(); ++e) {
            if (cur >= 0 && g.edge_src(e) != cur) continue;
            if (can_at(remaining - 1, static_cast<size_t>(g.edge_dst(e)))) {
                chosen = e;
                break;
            }
        }
        if (chosen < 0) return std::nullopt;  // cannot happen for feasible lengths
        if (cur < 0) p.source = g.vertex(g.edge_src(chosen)).id;
        p.edges.push_back(g.edge(chosen).id);
        cur = g.edge_dst(chosen);
        --remaining;
    }
    if (len == 0) p.source = g.vertex(target).id;
    return p;
}

void append_spine_run(const LadderSpec&, Path& p, long long from_col, long long to_col) {
    for (long long c = from_col; c < to_col; ++c)
        p.edges.push_back(ladder_spine_edge_name(c));
}

// Canonical witness of length len ending at a ladder vertex: spine origin if
// the length fits, else the least providing tail column, else the least loop
// column.
std::optional<Path> ladder_witness(const LadderSpec& g, const LadderVertex& v,
                                   std::uint64_t len) {
    if (!ladder_in_len_member(g, v, len)) return std::nullopt;
    long long llen = static_cast<long long>(len);
    if (v.depth > 0) {
        Path p;
        p.source = ladder_vertex_name({v.col, v.depth + llen});
        for (long long d = v.depth + llen; d > v.depth; --d)
            p.edges.push_back(ladder_tail_edge_name(v.col, d));
        return p;
    }
    long long c = v.col;
    if (g.spine == SpineKind::integers || llen <= c) {
        Path p;
        p.source = ladder_vertex_name({c - llen, 0});
        append_spine_run(g, p, c - llen, c);
        return p;
    }
    // len > c on a nat spine: a tail with surplus len - c, else a loop.
    for (long long j : g.tail_columns_in(0, c)) {
        long long L = *g.tail_length_at(j);
        long long depth = llen - (c - j);
        if (depth >= 1 && depth <= L) {
            Path p;
            p.source = ladder_vertex_name({j, depth});
            for (long long d = depth; d >= 1; --d) p.edges.push_back(ladder_tail_edge_name(j, d));
            append_spine_run(g, p, j, c);
            return p;
        }
    }
    for (long long b = 0; b <= c; ++b) {
        if (!g.loop_at(b)) continue;
        long long loops = llen - (c - b);
        if (loops < 1) continue;
        Path p;
        p.source = ladder_vertex_name({b, 0});
        for (long long r = 0; r < loops; ++r) p.edges.push_back(ladder_loop_edge_name(b));
        append_spine_run(g, p, b, c);
        return p;
    }
    return std::nullopt;  // unreachable: membership said yes
}

}  // namespace

std::optional<Path> find_turning_witness(const GraphSpec& g, const Path& alpha,
                                         std::uint64_t k) {
    if (!path_valid(g, alpha)) throw DomainError("invalid path");
    std::uint64_t len = alpha.length() + k;
    std::string v = path_range(g, alpha);
    if (const auto* fg = std::get_if<FiniteGraph>(&g))
        return finite_witness(*fg, fg->vertex_index(v), len);
    return ladder_witness(std::get<LadderSpec>(g), *parse_ladder_vertex(v), len);
}

bool cycle_cover_certificate(const FiniteGraph& g) {
    const size_t n = static_cast<size_t>(g.vertex_count());
    // reach[u][v]: a path of length >= 1 from u to v
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int e = 0; e < g.edge_count(); ++e)
        reach[static_cast<size_t>(g.edge_src(e))][static_cast<size_t>(g.edge_dst(e))] = true;
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    // Certify that no walk of length n+1 stays entirely off-cycle, so every
    // infinite path must pass a cycle base within n steps.
    std::vector<bool> off(n, false);
    for (size_t v = 0; v < n; ++v) off[v] = !reach[v][v];
    std::vector<bool> alive = off;
    for (size_t step = 0; step <= n; ++step) {
        std::vector<bool> next(n, false);
        for (int e = 0; e < g.edge_count(); ++e) {
            auto s = static_cast<size_t>(g.edge_src(e));
            auto d = static_cast<size_t>(g.edge_dst(e));
            if (alive[s] && off[d]) next[d] = true;
        }
        alive = std::move(next);
    }
    for (size_t v = 0; v < n; ++v)
        if (alive[v]) return false;
    return true;
}

namespace {

// Start vertex and k for the canonical violating path of a failing ladder.
YCounterexample ladder_counterexample_Y(const LadderSpec& g) {
    // The spine path from the lowest spine vertex violates offset k exactly
    // when no tail column has surplus >= k; scan k = 1, 2, ... for the first
    // violated offset.
    YCounterexample ce;
    ce.start_vertex = ladder_vertex_name({0, 0});
    ce.tag = "follow-spine";
    const long long far = LLONG_MAX / 8;
    for (std::uint64_t k = 1;; ++k) {
        if (k > 1'000'000) throw CapError("counterexample offset scan exceeded its cap");
        if (!g.tail_surplus_at_least(far, static_cast<long long>(k))) {
            ce.k = k;
            return ce;
        }
    }
}

YCounterexample ladder_counterexample_Y1(const LadderSpec& g) {
    // If some tail column attains the maximal surplus and that maximum is
    // >= 0, the path from that tail top violates k = 1; otherwise the spine
    // path from u0 does.
    YCounterexample ce;
    ce.tag = "follow-spine";
    ce.k = 1;
    auto best = g.argmax_tail_surplus();
    if (best && best->second >= 0) {
        long long len = *g.tail_length_at(best->first);
        ce.start_vertex = ladder_vertex_name({best->first, len});
        return ce;
    }
    ce.start_vertex = ladder_vertex_name({0, 0});
    return ce;
}

YVerdict check_Y_ladder(const LadderSpec& g, bool k1_only) {
    YVerdict v;
    if (g.spine == SpineKind::integers) {
        v.status = YStatus::holds;
        v.reason = YReason::ladder_criterion;
        v.detail = "int-spine";
        return v;
    }
    if (g.loops_infinite() && g.loops_nonempty()) {
        v.status = YStatus::holds;
        v.reason = YReason::cycle_cover;
        v.detail = "loop-columns";
        return v;
    }
    if (g.has_steep_family()) {
        v.status = YStatus::holds;
        v.reason = YReason::ladder_criterion;
        v.detail = "slope-criterion";
        return v;
    }
    if (g.loops_nonempty()) {
        // Finitely many loop columns still provide every in-path length at
        // every spine vertex to their right.
        v.status = YStatus::holds;
        v.reason = YReason::ladder_criterion;
        v.detail = "loop-columns";
        return v;
    }
    v.status = YStatus::fails;
    v.reason = YReason::counterexample;
    v.counterexample = k1_only ? ladder_counterexample_Y1(g) : ladder_counterexample_Y(g);
    return v;
}

YVerdict check_Y_impl(const GraphSpec& g, bool k1_only) {
    if (const auto* fg = std::get_if<FiniteGraph>(&g)) {
        if (!cycle_cover_certificate(*fg))
            throw Error("cycle cover certificate failed on a finite graph");
        YVerdict v;
        v.status = YStatus::holds;
        v.reason = YReason::finite_graph_theorem;
        return v;
    }
    return check_Y_ladder(std::get<LadderSpec>(g), k1_only);
}

}  // namespace

std::string YVerdict::reason_label() const {
    switch (reason) {
        case YReason::finite_graph_theorem: return "finite-graph-theorem";
        case YReason::cycle_cover: return "cycle-cover";
        case YReason::ladder_criterion: return detail.empty() ? "ladder-criterion" : detail;
        case YReason::counterexample: return "counterexample";
    }
    return "unknown";
}

YVerdict check_condition_Y(const GraphSpec& g) { return check_Y_impl(g, false); }

YVerdict check_condition_Y1(const GraphSpec& g) { return check_Y_impl(g, true); }

std::optional<Path> refute_Y1_bounded(const GraphSpec& g, const std::string& start, int depth) {
    if (depth < 1) throw DomainError("refutation depth must be at least 1");
    WalkView view(g);
    if (!view.has_vertex(start)) throw DomainError("unknown vertex '" + start + "'");

    // Levels of the non-turning prefix system: level n holds the length-n
    // paths from start all of whose nonempty prefixes end at non-turning
    // nodes. Memoized: level n extends level n-1.
    struct State {
        std::vector<std::vector<std::pair<Path, std::string>>> levels;  // (path, range)
    };
    auto state = std::make_shared<State>();
    auto level_items = [state, &view, start](int n) -> const std::vector<std::pair<Path, std::string>>& {
        while (static_cast<int>(state->levels.size()) < n) {
            int k = static_cast<int>(state->levels.size()) + 1;
            std::vector<std::pair<Path, std::string>> items;
            if (k == 1) {
                for (auto& [eid, target] : view.out_edges(start)) {
                    if (!view.is_turning(1, target))
                        items.emplace_back(Path{{eid}, start}, target);
                }
            } else {
                for (const auto& [p, range] : state->levels[static_cast<size_t>(k - 2)]) {
                    for (auto& [eid, target] : view.out_edges(range)) {
                        if (!view.is_turning(static_cast<std::uint64_t>(k), target)) {
                            Path ext = p;
                            ext.edges.push_back(eid);
                            items.emplace_back(std::move(ext), target);
                        }
                    }
                }
            }
            std::sort(items.begin(), items.end());
            state->levels.push_back(std::move(items));
        }
        return state->levels[static_cast<size_t>(n - 1)];
    };

    koenig::LevelSystem<Path> sys;
    sys.max_level = depth;
    sys.level = [&level_items](int n) {
        std::vector<Path> out;
        for (const auto& [p, range] : level_items(n)) out.push_back(p);
        return out;
    };
    sys.step = [](int, const Path& p) {
        Path parent = p;
        parent.edges.pop_back();
        return parent;
    };
    try {
        auto thread = koenig::extract_thread(sys, depth);
        return thread.back();
    } catch (const koenig::EmptyLevelError&) {
        return std::nullopt;
    }
}

}  // namespace lpa
