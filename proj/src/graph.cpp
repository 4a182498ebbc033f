#include "lpa/graph.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <numeric>

#include "lpa/eventually_periodic.hpp"

namespace lpa {

namespace {

long long floor_div(long long a, long long b) {
    // b > 0
    long long q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}

long long ceil_div(long long a, long long b) {
    // b > 0
    long long q = a / b;
    if ((a % b != 0) && (a > 0)) ++q;
    return q;
}

// Does the eventually periodic set contain a member in [lo, hi]?
bool epset_intersects_range(const EventuallyPeriodicSet& s, long long lo, long long hi) {
    if (hi < lo) return false;
    if (lo < 0) lo = 0;
    if (hi < lo) return false;
    auto ulo = static_cast<std::uint64_t>(lo);
    auto uhi = static_cast<std::uint64_t>(hi);
    for (auto e : s.exceptions())
        if (e >= ulo && e <= uhi) return true;
    if (s.residues().empty()) return false;
    std::uint64_t start = std::max<std::uint64_t>(ulo, s.threshold());
    if (start > uhi) return false;
    if (uhi - start + 1 >= s.period()) return true;
    for (std::uint64_t v = start; v <= uhi; ++v)
        if (s.contains(v)) return true;
    return false;
}

}  // namespace

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

FiniteGraph FiniteGraph::build(std::vector<VertexInfo> vertices, std::vector<Edge> edges) {
    FiniteGraph g;
    std::sort(vertices.begin(), vertices.end(),
              [](const VertexInfo& a, const VertexInfo& b) { return a.id < b.id; });
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(edges);

    for (int i = 0; i < g.vertex_count(); ++i) {
        const auto& v = g.vertices_[static_cast<size_t>(i)];
        if (!valid_identifier(v.id)) throw DomainError("invalid vertex id '" + v.id + "'");
        if (!g.vertex_by_id_.emplace(v.id, i).second)
            throw DomainError("duplicate vertex id '" + v.id + "'");
    }
    g.out_.assign(static_cast<size_t>(g.vertex_count()), {});
    g.in_.assign(static_cast<size_t>(g.vertex_count()), {});
    for (int i = 0; i < g.edge_count(); ++i) {
        const auto& e = g.edges_[static_cast<size_t>(i)];
        if (!valid_identifier(e.id)) throw DomainError("invalid edge id '" + e.id + "'");
        if (g.vertex_by_id_.count(e.id))
            throw DomainError("edge id '" + e.id + "' collides with a vertex id");
        if (!g.edge_by_id_.emplace(e.id, i).second)
            throw DomainError("duplicate edge id '" + e.id + "'");
        auto s = g.vertex_by_id_.find(e.src);
        auto d = g.vertex_by_id_.find(e.dst);
        if (s == g.vertex_by_id_.end())
            throw DomainError("edge '" + e.id + "' has undeclared source '" + e.src + "'");
        if (d == g.vertex_by_id_.end())
            throw DomainError("edge '" + e.id + "' has undeclared target '" + e.dst + "'");
        g.src_.push_back(s->second);
        g.dst_.push_back(d->second);
        g.out_[static_cast<size_t>(s->second)].push_back(i);
        g.in_[static_cast<size_t>(d->second)].push_back(i);
    }
    return g;
}

int FiniteGraph::find_vertex(const std::string& id) const {
    auto it = vertex_by_id_.find(id);
    return it == vertex_by_id_.end() ? -1 : it->second;
}

int FiniteGraph::find_edge(const std::string& id) const {
    auto it = edge_by_id_.find(id);
    return it == edge_by_id_.end() ? -1 : it->second;
}

int FiniteGraph::vertex_index(const std::string& id) const {
    int v = find_vertex(id);
    if (v < 0) throw DomainError("unknown vertex '" + id + "'");
    return v;
}

int FiniteGraph::edge_index(const std::string& id) const {
    int e = find_edge(id);
    if (e < 0) throw DomainError("unknown edge '" + id + "'");
    return e;
}

bool FiniteGraph::is_infinite_emitter(int v) const {
    for (int e : out_edges(v))
        if (edges_[static_cast<size_t>(e)].infinite_family) return true;
    return false;
}

Edge FiniteGraph::family_member(int e, std::uint64_t index) const {
    const Edge& base = edges_[static_cast<size_t>(e)];
    if (!base.infinite_family)
        throw DomainError("edge '" + base.id + "' is not an infinite family");
    Edge member = base;
    member.id = base.id + "_" + std::to_string(index);
    member.infinite_family = false;
    return member;
}

bool FiniteGraph::row_finite() const {
    for (const auto& e : edges_)
        if (e.infinite_family) return false;
    return true;
}

std::vector<int> FiniteGraph::sinks() const {
    std::vector<int> out;
    for (int v = 0; v < vertex_count(); ++v)
        if (is_sink(v)) out.push_back(v);
    return out;
}

std::vector<int> FiniteGraph::infinite_emitters() const {
    std::vector<int> out;
    for (int v = 0; v < vertex_count(); ++v)
        if (is_infinite_emitter(v)) out.push_back(v);
    return out;
}

long long LadderSpec::min_col() const { return spine == SpineKind::nat ? 0 : LLONG_MIN; }

bool LadderSpec::col_on_spine(long long col) const {
    return spine == SpineKind::integers || col >= 0;
}

bool LadderSpec::loop_at(long long col) const {
    if (!col_on_spine(col)) return false;
    switch (loops.kind) {
        case LoopPattern::Kind::none: return false;
        case LoopPattern::Kind::all: return true;
        case LoopPattern::Kind::cols:
            return std::binary_search(loops.cols.begin(), loops.cols.end(), col);
        case LoopPattern::Kind::from:
            return col >= loops.start && (col - loops.start) % loops.step == 0;
    }
    return false;
}

bool LadderSpec::loop_in_range(long long lo, long long hi) const {
    if (spine == SpineKind::nat && lo < 0) lo = 0;
    if (lo > hi) return false;
    switch (loops.kind) {
        case LoopPattern::Kind::none: return false;
        case LoopPattern::Kind::all: return true;
        case LoopPattern::Kind::cols:
            for (long long c : loops.cols)
                if (c >= lo && c <= hi && col_on_spine(c)) return true;
            return false;
        case LoopPattern::Kind::from: {
            long long first = loops.start;
            if (first < lo) first = loops.start + loops.step * ceil_div(lo - loops.start, loops.step);
            return first <= hi;
        }
    }
    return false;
}

bool LadderSpec::loops_nonempty() const {
    switch (loops.kind) {
        case LoopPattern::Kind::none: return false;
        case LoopPattern::Kind::all: return true;
        case LoopPattern::Kind::from: return true;  // the progression runs rightward
        case LoopPattern::Kind::cols:
            for (long long c : loops.cols)
                if (col_on_spine(c)) return true;
            return false;
    }
    return false;
}

bool LadderSpec::loops_infinite() const {
    return loops.kind == LoopPattern::Kind::all || loops.kind == LoopPattern::Kind::from;
}

std::optional<long long> LadderSpec::tail_length_at(long long col) const {
    if (!col_on_spine(col)) return std::nullopt;
    // Later exceptions win over earlier ones, exceptions win over families,
    // later families win over earlier ones.
    for (auto it = exceptions.rbegin(); it != exceptions.rend(); ++it)
        if (it->col == col) return it->length;
    for (auto it = families.rbegin(); it != families.rend(); ++it) {
        if (col < it->start_col) continue;
        if ((col - it->start_col) % it->step != 0) continue;
        long long t = (col - it->start_col) / it->step;
        return it->slope * t + it->offset;
    }
    return std::nullopt;
}

std::vector<long long> LadderSpec::tail_columns_in(long long lo, long long hi) const {
    if (spine == SpineKind::nat && lo < 0) lo = 0;
    std::set<long long> cols;
    for (const auto& e : exceptions)
        if (e.col >= lo && e.col <= hi && col_on_spine(e.col)) cols.insert(e.col);
    for (const auto& f : families) {
        long long t0 = f.start_col >= lo ? 0 : ceil_div(lo - f.start_col, f.step);
        for (long long t = t0;; ++t) {
            long long c = f.start_col + f.step * t;
            if (c > hi) break;
            cols.insert(c);
        }
    }
    return {cols.begin(), cols.end()};
}

namespace {

// The set of family indices t whose column is not overridden by an exception
// or by a later-declared family. Eventually periodic in t, so it is exact.
EventuallyPeriodicSet owned_family_ts(const LadderSpec& g, size_t fi) {
    const TailFamily& f = g.families[fi];
    long long period = 1;
    for (size_t j = fi + 1; j < g.families.size(); ++j) {
        period = std::lcm(period, g.families[j].step);
        if (period > 2'000'000) throw DomainError("tail family steps too large to analyze");
    }
    long long threshold = 0;
    for (size_t j = fi + 1; j < g.families.size(); ++j) {
        long long t = ceil_div(g.families[j].start_col - f.start_col, f.step);
        threshold = std::max(threshold, t);
    }
    for (const auto& e : g.exceptions) {
        long long t = ceil_div(e.col - f.start_col + 1, f.step);
        threshold = std::max(threshold, t);
    }
    auto shadowed = [&](long long t) {
        long long c = f.start_col + f.step * t;
        for (const auto& e : g.exceptions)
            if (e.col == c) return true;
        for (size_t j = fi + 1; j < g.families.size(); ++j) {
            const auto& h = g.families[j];
            if (c >= h.start_col && (c - h.start_col) % h.step == 0) return true;
        }
        return false;
    };
    std::vector<bool> bits;
    bits.reserve(static_cast<size_t>(threshold + period));
    for (long long t = 0; t < threshold + period; ++t) bits.push_back(!shadowed(t));
    return EventuallyPeriodicSet::from_orbit(bits, static_cast<std::uint64_t>(threshold),
                                             static_cast<std::uint64_t>(period));
}

// Resolved exception columns (later exception declarations win).
std::map<long long, long long> resolved_exceptions(const LadderSpec& g) {
    std::map<long long, long long> m;
    for (const auto& e : g.exceptions)
        if (g.col_on_spine(e.col)) m[e.col] = e.length;
    return m;
}

}  // namespace

bool LadderSpec::tail_surplus_at_least(long long col, long long surplus) const {
    for (const auto& [c, len] : resolved_exceptions(*this))
        if (c <= col && len - c >= surplus) return true;
    for (size_t i = 0; i < families.size(); ++i) {
        const TailFamily& f = families[i];
        // Solve over t >= 0: start + step*t <= col and
        // (slope - step)*t + (offset - start) >= surplus.
        if (f.start_col > col) continue;
        long long t_hi = floor_div(col - f.start_col, f.step);
        if (spine == SpineKind::nat && f.start_col < 0) {
            // families are validated to start on the spine; defensive only
            continue;
        }
        long long d = f.slope - f.step;
        long long need = surplus - (f.offset - f.start_col);
        long long lo = 0, hi = t_hi;
        if (d > 0) {
            lo = std::max(lo, ceil_div(need, d));
        } else if (d < 0) {
            // d*t >= need with d < 0  <=>  t <= floor(need/d) = floor(-need / -d)
            hi = std::min(hi, floor_div(-need, -d));
        } else {
            if (need > 0) continue;  // constant surplus below requirement
        }
        if (lo > hi) continue;
        if (epset_intersects_range(owned_family_ts(*this, i), lo, hi)) return true;
    }
    return false;
}

std::optional<long long> LadderSpec::sup_tail_surplus() const {
    bool any = false;
    long long best = LLONG_MIN;
    for (const auto& [c, len] : resolved_exceptions(*this)) {
        any = true;
        best = std::max(best, len - c);
    }
    for (size_t i = 0; i < families.size(); ++i) {
        const TailFamily& f = families[i];
        auto owned = owned_family_ts(*this, i);
        if (owned.empty()) continue;
        any = true;
        long long d = f.slope - f.step;
        auto sigma = [&](long long t) { return d * t + (f.offset - f.start_col); };
        if (!owned.residues().empty() && d > 0) return LLONG_MAX;  // unbounded
        // Bounded cases: maximum over exceptions-members, plus (for the
        // periodic part, d <= 0) the smallest periodic member.
        for (auto t : owned.exceptions()) best = std::max(best, sigma(static_cast<long long>(t)));
        if (!owned.residues().empty()) {
            std::uint64_t t = owned.threshold();
            while (!owned.contains(t)) ++t;
            best = std::max(best, sigma(static_cast<long long>(t)));
        }
    }
    if (!any) return std::nullopt;
    return best;
}

std::optional<std::pair<long long, long long>> LadderSpec::argmax_tail_surplus() const {
    std::vector<std::pair<long long, long long>> cands;  // (col, surplus)
    for (const auto& [c, len] : resolved_exceptions(*this)) cands.emplace_back(c, len - c);
    for (size_t i = 0; i < families.size(); ++i) {
        const TailFamily& f = families[i];
        auto owned = owned_family_ts(*this, i);
        if (owned.empty()) continue;
        long long d = f.slope - f.step;
        auto col_of = [&](long long t) { return f.start_col + f.step * t; };
        auto sigma = [&](long long t) { return d * t + (f.offset - f.start_col); };
        if (!owned.residues().empty() && d > 0) return std::nullopt;  // unbounded
        // Surplus is non-increasing along the periodic part here, so the
        // earliest periodic member dominates it; explicit members are all
        // candidates.
        for (auto t : owned.exceptions())
            cands.emplace_back(col_of(static_cast<long long>(t)), sigma(static_cast<long long>(t)));
        if (!owned.residues().empty()) {
            std::uint64_t t = owned.threshold();
            while (!owned.contains(t)) ++t;
            cands.emplace_back(col_of(static_cast<long long>(t)), sigma(static_cast<long long>(t)));
        }
    }
    if (cands.empty()) return std::nullopt;
    long long best_sigma = LLONG_MIN, best_col = LLONG_MAX;
    for (auto& [c, s] : cands) {
        if (s > best_sigma || (s == best_sigma && c < best_col)) {
            best_sigma = s;
            best_col = c;
        }
    }
    return std::make_pair(best_col, best_sigma);
}

bool LadderSpec::has_steep_family() const {
    for (size_t i = 0; i < families.size(); ++i)
        if (families[i].slope > families[i].step && !owned_family_ts(*this, i).residues().empty())
            return true;
    return false;
}

std::string ladder_vertex_name(const LadderVertex& v) {
    std::string col = v.col < 0 ? "n" + std::to_string(-v.col) : std::to_string(v.col);
    if (v.depth == 0) return "u" + col;
    return "t" + col + "d" + std::to_string(v.depth);
}

std::optional<LadderVertex> parse_ladder_vertex(const std::string& name) {
    auto parse_num = [](const std::string& s, size_t& i, long long& out) {
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
    if (name.empty()) return std::nullopt;
    size_t i = 1;
    long long col = 0;
    if (name[0] == 'u') {
        if (!parse_num(name, i, col) || i != name.size()) return std::nullopt;
        return LadderVertex{col, 0};
    }
    if (name[0] == 't') {
        if (!parse_num(name, i, col)) return std::nullopt;
        if (i >= name.size() || name[i] != 'd') return std::nullopt;
        ++i;
        long long depth = 0;
        if (!parse_num(name, i, depth) || i != name.size() || depth < 1) return std::nullopt;
        return LadderVertex{col, depth};
    }
    return std::nullopt;
}

bool ladder_vertex_exists(const LadderSpec& g, const LadderVertex& v) {
    if (!g.col_on_spine(v.col)) return false;
    if (v.depth == 0) return true;
    auto len = g.tail_length_at(v.col);
    return len && v.depth >= 1 && v.depth <= *len;
}

namespace {
std::string col_tag(long long col) {
    return col < 0 ? "n" + std::to_string(-col) : std::to_string(col);
}
}  // namespace

std::string ladder_spine_edge_name(long long col) { return "s" + col_tag(col); }
std::string ladder_loop_edge_name(long long col) { return "l" + col_tag(col); }
std::string ladder_tail_edge_name(long long col, long long depth) {
    return "t" + col_tag(col) + "e" + std::to_string(depth);
}

std::vector<std::pair<std::string, LadderVertex>> ladder_out_edges(const LadderSpec& g,
                                                                   const LadderVertex& v) {
    if (!ladder_vertex_exists(g, v))
        throw DomainError("unknown ladder vertex '" + ladder_vertex_name(v) + "'");
    std::vector<std::pair<std::string, LadderVertex>> out;
    if (v.depth == 0) {
        if (g.loop_at(v.col)) out.emplace_back(ladder_loop_edge_name(v.col), v);
        out.emplace_back(ladder_spine_edge_name(v.col), LadderVertex{v.col + 1, 0});
    } else {
        out.emplace_back(ladder_tail_edge_name(v.col, v.depth), LadderVertex{v.col, v.depth - 1});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<std::string, LadderVertex>> ladder_in_edges(const LadderSpec& g,
                                                                  const LadderVertex& v) {
    if (!ladder_vertex_exists(g, v))
        throw DomainError("unknown ladder vertex '" + ladder_vertex_name(v) + "'");
    std::vector<std::pair<std::string, LadderVertex>> in;
    if (v.depth == 0) {
        if (g.col_on_spine(v.col - 1))
            in.emplace_back(ladder_spine_edge_name(v.col - 1), LadderVertex{v.col - 1, 0});
        if (g.loop_at(v.col)) in.emplace_back(ladder_loop_edge_name(v.col), v);
        if (auto len = g.tail_length_at(v.col); len && *len >= 1)
            in.emplace_back(ladder_tail_edge_name(v.col, 1), LadderVertex{v.col, 1});
    } else {
        auto len = g.tail_length_at(v.col);
        if (len && v.depth + 1 <= *len)
            in.emplace_back(ladder_tail_edge_name(v.col, v.depth + 1),
                            LadderVertex{v.col, v.depth + 1});
    }
    std::sort(in.begin(), in.end());
    return in;
}

bool ladder_is_source(const LadderSpec& g, const LadderVertex& v) {
    return ladder_in_edges(g, v).empty();
}

FiniteGraph materialize_window(const LadderSpec& g, int cols) {
    if (cols < 1) throw DomainError("window must span at least one column");
    long long lo = g.spine == SpineKind::nat ? 0 : -static_cast<long long>(cols);
    long long hi = cols;
    std::vector<VertexInfo> vertices;
    std::vector<Edge> edges;
    for (long long c = lo; c <= hi; ++c) {
        bool boundary = (c == hi) || (g.spine == SpineKind::integers && c == lo);
        vertices.push_back({ladder_vertex_name({c, 0}), boundary});
        if (c < hi)
            edges.push_back({ladder_spine_edge_name(c), ladder_vertex_name({c, 0}),
                             ladder_vertex_name({c + 1, 0})});
        if (g.loop_at(c))
            edges.push_back({ladder_loop_edge_name(c), ladder_vertex_name({c, 0}),
                             ladder_vertex_name({c, 0})});
    }
    for (long long c : g.tail_columns_in(lo, hi)) {
        long long len = *g.tail_length_at(c);
        for (long long d = 1; d <= len; ++d) {
            vertices.push_back({ladder_vertex_name({c, d}), false});
            edges.push_back({ladder_tail_edge_name(c, d), ladder_vertex_name({c, d}),
                             ladder_vertex_name({c, d - 1})});
        }
    }
    return FiniteGraph::build(std::move(vertices), std::move(edges));
}

std::vector<std::string> detect_sinks(const GraphSpec& g) {
    if (const auto* fg = std::get_if<FiniteGraph>(&g)) {
        std::vector<std::string> out;
        for (int v : fg->sinks()) out.push_back(fg->vertex(v).id);
        return out;
    }
    // Every ladder vertex emits: spine vertices have a spine edge, tail
    // vertices step toward the spine. The window invariant test spot-checks
    // this construction property.
    return {};
}

bool is_row_finite(const GraphSpec& g) {
    if (const auto* fg = std::get_if<FiniteGraph>(&g)) return fg->row_finite();
    return true;
}

std::string export_dot(const GraphSpec& g, int cols) {
    const FiniteGraph* fg = std::get_if<FiniteGraph>(&g);
    FiniteGraph window;
    if (!fg) {
        window = materialize_window(std::get<LadderSpec>(g), cols);
        fg = &window;
    }
    std::string out = "digraph lpa {\n  rankdir=LR;\n";
    for (int v = 0; v < fg->vertex_count(); ++v) {
        out += "  \"" + fg->vertex(v).id + "\"";
        if (fg->is_boundary(v)) out += " [style=dashed]";
        out += ";\n";
    }
    for (int e = 0; e < fg->edge_count(); ++e) {
        const Edge& ed = fg->edge(e);
        out += "  \"" + ed.src + "\" -> \"" + ed.dst + "\" [label=\"" + ed.id + "\"";
        if (ed.infinite_family) out += ", style=bold, headlabel=\"inf\"";
        out += "];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace lpa
