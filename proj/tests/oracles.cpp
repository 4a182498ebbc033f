#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "lpa/path_analysis.hpp"

namespace lpa::test {

std::set<std::uint64_t> enumerate_in_path_lengths(const FiniteGraph& g, const std::string& vertex,
                                                  std::uint64_t max_len) {
    int target = g.vertex_index(vertex);
    std::set<std::uint64_t> lengths;
    // enumerate forward from every start vertex
    std::function<void(int, std::uint64_t)> walk = [&](int v, std::uint64_t len) {
        if (len > 0 && v == target) lengths.insert(len);
        if (len == max_len) return;
        for (int e : g.out_edges(v)) walk(g.edge_dst(e), len + 1);
    };
    for (int v = 0; v < g.vertex_count(); ++v) walk(v, 0);
    return lengths;
}

std::vector<std::vector<bool>> stepwise_in_path_table(const FiniteGraph& g,
                                                      std::uint64_t max_len) {
    const size_t n = static_cast<size_t>(g.vertex_count());
    std::vector<std::vector<bool>> table;
    table.emplace_back(n, true);
    for (std::uint64_t len = 1; len <= max_len; ++len) {
        std::vector<bool> next(n, false);
        const auto& prev = table.back();
        for (int e = 0; e < g.edge_count(); ++e)
            if (prev[static_cast<size_t>(g.edge_src(e))])
                next[static_cast<size_t>(g.edge_dst(e))] = true;
        table.push_back(std::move(next));
    }
    return table;
}

FiniteGraph random_finite_graph(Rng& rng, int max_vertices, int max_edges, bool ensure_no_sink) {
    int nv = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_vertices));
    int ne = static_cast<int>(rng() % static_cast<std::uint64_t>(max_edges + 1));
    std::vector<VertexInfo> vertices;
    for (int v = 0; v < nv; ++v) vertices.push_back({"v" + std::to_string(v), false});
    std::vector<Edge> edges;
    for (int e = 0; e < ne; ++e) {
        auto s = rng() % static_cast<std::uint64_t>(nv);
        auto d = rng() % static_cast<std::uint64_t>(nv);
        edges.push_back({"e" + std::to_string(e), "v" + std::to_string(s),
                         "v" + std::to_string(d), false});
    }
    if (ensure_no_sink) {
        // one pass: giving a sink an out-edge cannot create a new sink
        std::vector<bool> has_out(static_cast<size_t>(nv), false);
        for (const auto& e : edges) has_out[static_cast<size_t>(std::stoi(e.src.substr(1)))] = true;
        for (int v = 0; v < nv; ++v) {
            if (has_out[static_cast<size_t>(v)]) continue;
            auto d = rng() % static_cast<std::uint64_t>(nv);
            edges.push_back({"e" + std::to_string(static_cast<int>(edges.size())),
                             "v" + std::to_string(v), "v" + std::to_string(d), false});
        }
    }
    return FiniteGraph::build(std::move(vertices), std::move(edges));
}

LadderSpec random_ladder(Rng& rng) {
    LadderSpec l;
    l.spine = (rng() % 5 == 0) ? SpineKind::integers : SpineKind::nat;
    long long min_start = l.spine == SpineKind::nat ? 0 : -3;
    switch (rng() % 100 / 25) {
        case 0: l.loops.kind = LoopPattern::Kind::none; break;
        case 1:
            if (rng() % 3 == 0) {
                l.loops.kind = LoopPattern::Kind::all;
            } else {
                l.loops.kind = LoopPattern::Kind::from;
                l.loops.start = min_start + static_cast<long long>(rng() % 5);
                l.loops.step = 1 + static_cast<long long>(rng() % 3);
            }
            break;
        case 2: {
            l.loops.kind = LoopPattern::Kind::cols;
            int n = 1 + static_cast<int>(rng() % 3);
            std::set<long long> cols;
            for (int i = 0; i < n; ++i)
                cols.insert(min_start + static_cast<long long>(rng() % 9));
            l.loops.cols.assign(cols.begin(), cols.end());
            break;
        }
        default: l.loops.kind = LoopPattern::Kind::none; break;
    }
    int nfam = static_cast<int>(rng() % 3);
    for (int i = 0; i < nfam; ++i) {
        TailFamily f;
        f.start_col = min_start + static_cast<long long>(rng() % 5);
        f.step = 1 + static_cast<long long>(rng() % 3);
        f.slope = static_cast<long long>(rng() % 5);
        f.offset = 1 + static_cast<long long>(rng() % 4);
        l.families.push_back(f);
    }
    int nexc = static_cast<int>(rng() % 3);
    for (int i = 0; i < nexc; ++i) {
        TailException e;
        e.col = (l.spine == SpineKind::nat ? 0 : -4) + static_cast<long long>(rng() % 9);
        e.length = 1 + static_cast<long long>(rng() % 6);
        l.exceptions.push_back(e);
    }
    return l;
}

namespace {

// Window size that keeps every needed witness in view for offsets <= k_max:
// the budget formula plus, for growing tail families, the column where the
// surplus first reaches k_max.
int oracle_window(const LadderSpec& spec, std::uint64_t k_max) {
    long long exc_max = 0, b_max = 0;
    for (const auto& e : spec.exceptions) exc_max = std::max(exc_max, std::llabs(e.col));
    for (const auto& f : spec.families) b_max = std::max(b_max, std::llabs(f.offset));
    long long w = 4 * (static_cast<long long>(k_max) + exc_max + b_max + 4);
    for (const auto& f : spec.families) {
        if (f.slope <= f.step) continue;
        long long need = static_cast<long long>(k_max) - (f.offset - f.start_col);
        long long t = need <= 0 ? 0 : (need + (f.slope - f.step) - 1) / (f.slope - f.step);
        // overridden columns can push the witness a few periods further out
        t += 4 * static_cast<long long>(spec.exceptions.size() + spec.families.size() + 1);
        w = std::max(w, 4 * (f.start_col + f.step * t + 4));
    }
    return static_cast<int>(std::min<long long>(std::max<long long>(w, 24), 600));
}

}  // namespace

bool ladder_oracle_Y_fails(const LadderSpec& spec, std::uint64_t k_max) {
    const int W = oracle_window(spec, k_max);
    FiniteGraph fg = materialize_window(spec, W);
    GraphSpec gs(fg);

    long long max_tail = 1;
    for (long long c : spec.tail_columns_in(spec.spine == SpineKind::nat ? 0 : -W, W))
        max_tail = std::max(max_tail, *spec.tail_length_at(c));
    const std::uint64_t depth_budget =
        static_cast<std::uint64_t>(2 * W + max_tail + 4 + static_cast<long long>(k_max));
    auto table = stepwise_in_path_table(fg, depth_budget + k_max + 1);

    const int boundary = fg.vertex_index(ladder_vertex_name({W, 0}));

    // Start vertices: spine columns and tails in the middle-left band, where
    // the window's in-path data is exact.
    std::vector<int> starts;
    long long lo_col = spec.spine == SpineKind::nat ? 0 : -(W / 2);
    for (int v = 0; v < fg.vertex_count(); ++v) {
        auto lv = parse_ladder_vertex(fg.vertex(v).id);
        if (lv && lv->col >= lo_col && lv->col <= W / 2) starts.push_back(v);
    }

    for (std::uint64_t k = 1; k <= k_max; ++k) {
        // state (v, n): the walk is at v with prefix length n and no prefix
        // so far had a witness
        std::vector<std::vector<char>> seen(static_cast<size_t>(fg.vertex_count()));
        for (auto& row : seen) row.assign(depth_budget + 1, 0);
        std::function<bool(int, std::uint64_t)> alive = [&](int v, std::uint64_t n) -> bool {
            if (n > depth_budget) return false;  // cannot happen: loops kill walks
            if (table[n + k][static_cast<size_t>(v)]) return false;  // witness exists
            if (v == boundary) return true;  // violating all the way out of view
            if (seen[static_cast<size_t>(v)][n]) return false;
            seen[static_cast<size_t>(v)][n] = 1;
            for (int e : fg.out_edges(v))
                if (alive(fg.edge_dst(e), n + 1)) return true;
            return false;
        };
        for (int s : starts)
            if (alive(s, 0)) return true;
    }
    return false;
}

Element random_raw_element(Rng& rng, const FiniteGraph& g, std::uint64_t max_path_len,
                           int max_terms) {
    auto paths = enumerate_paths(g, max_path_len);
    GraphSpec gs(g);
    std::vector<std::vector<Path>> by_range(static_cast<size_t>(g.vertex_count()));
    for (const auto& p : paths)
        by_range[static_cast<size_t>(g.vertex_index(path_range(gs, p)))].push_back(p);
    Element x;
    int terms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_terms));
    for (int t = 0; t < terms; ++t) {
        auto v = static_cast<size_t>(rng() % static_cast<std::uint64_t>(g.vertex_count()));
        const auto& bucket = by_range[v];
        if (bucket.empty()) continue;
        const Path& alpha = bucket[rng() % bucket.size()];
        const Path& beta = bucket[rng() % bucket.size()];
        long long c = static_cast<long long>(rng() % 7) - 3;
        if (c == 0) c = 1;
        Monomial m;
        m.alpha = path_to_ipath(g, alpha);
        m.beta = path_to_ipath(g, beta);
        x.add_term(m, c);
    }
    return x;
}

Element random_element(Rng& rng, const FiniteGraph& g, std::uint64_t max_path_len,
                       int max_terms) {
    return normal_form(g, random_raw_element(rng, g, max_path_len, max_terms));
}

LinearOracle::LinearOracle(const FiniteGraph& g, std::uint64_t max_len) : g_(g) {
    auto paths = enumerate_paths(g, max_len);
    GraphSpec gs(g);
    std::vector<std::vector<Path>> by_range(static_cast<size_t>(g.vertex_count()));
    for (const auto& p : paths)
        by_range[static_cast<size_t>(g.vertex_index(path_range(gs, p)))].push_back(p);
    for (const auto& bucket : by_range) {
        for (const auto& a : bucket) {
            for (const auto& b : bucket) {
                Monomial m;
                m.alpha = path_to_ipath(g, a);
                m.beta = path_to_ipath(g, b);
                monomials_.push_back(m);
            }
        }
    }
    std::sort(monomials_.begin(), monomials_.end(),
              [](const Monomial& a, const Monomial& b) { return MonomialOrder{}(a, b); });
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
        index_.emplace(monomials_[i], i);
        if (reducible(monomials_[i])) reducible_.push_back(i);
    }
}

bool LinearOracle::reducible(const Monomial& m) const {
    // Recomputed here on purpose: the oracle must not depend on the engine's
    // reducibility predicate.
    if (m.alpha.edges.empty() || m.beta.edges.empty()) return false;
    int e = m.alpha.edges.back();
    if (m.beta.edges.back() != e) return false;
    int w = g_.edge_src(e);
    if (g_.is_infinite_emitter(w) || g_.is_boundary(w)) return false;
    const auto& star = g_.out_edges(w);
    return !star.empty() && star.front() == e;
}

std::vector<std::pair<std::size_t, Coeff>> LinearOracle::relation_row(const Monomial& m) const {
    // m  -  (contracted  -  sum of siblings)
    std::vector<std::pair<std::size_t, Coeff>> row;
    row.emplace_back(index_.at(m), 1);
    int e = m.alpha.edges.back();
    int w = g_.edge_src(e);
    Monomial contracted = m;
    contracted.alpha.edges.pop_back();
    contracted.beta.edges.pop_back();
    row.emplace_back(index_.at(contracted), -1);
    for (int f : g_.out_edges(w)) {
        if (f == e) continue;
        Monomial sib = contracted;
        sib.alpha.edges.push_back(f);
        sib.beta.edges.push_back(f);
        row.emplace_back(index_.at(sib), 1);
    }
    return row;
}

std::size_t LinearOracle::relation_rank() const {
    // dense exact Gauss over the relation rows
    std::vector<std::vector<Coeff>> rows;
    for (std::size_t r : reducible_) {
        std::vector<Coeff> dense(monomials_.size(), 0);
        for (const auto& [col, c] : relation_row(monomials_[r])) dense[col] += c;
        rows.push_back(std::move(dense));
    }
    std::size_t rank = 0;
    std::size_t col = 0;
    const std::size_t ncols = monomials_.size();
    for (; col < ncols && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            Coeff a = rows[rank][col];
            Coeff b = rows[r][col];
            for (std::size_t c = col; c < ncols; ++c)
                rows[r][c] = rows[r][c] * a - rows[rank][c] * b;
        }
        ++rank;
    }
    return rank;
}

bool LinearOracle::in_space(const Element& x) const {
    for (const auto& [m, c] : x.terms()) {
        (void)c;
        if (!index_.count(m)) return false;
    }
    return true;
}

Element LinearOracle::reduce(const Element& x) const {
    std::map<std::size_t, Coeff> vec;
    for (const auto& [m, c] : x.terms()) vec[index_.at(m)] = c;
    for (;;) {
        // eliminate the highest-order reducible coordinate
        std::size_t target = monomials_.size();
        for (auto it = vec.rbegin(); it != vec.rend(); ++it) {
            if (it->second == 0) continue;
            if (reducible(monomials_[it->first])) {
                target = it->first;
                break;
            }
        }
        if (target == monomials_.size()) break;
        Coeff c = vec[target];
        for (const auto& [col, rc] : relation_row(monomials_[target])) {
            vec[col] -= c * rc;
        }
    }
    Element out;
    for (const auto& [i, c] : vec)
        if (c != 0) out.add_term(monomials_[i], c);
    return out;
}

}  // namespace lpa::test
