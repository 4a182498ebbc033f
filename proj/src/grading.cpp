#include "lpa/grading.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <random>
#include <sstream>

namespace lpa {

std::string path_text(const Path& p) {
    if (p.trivial()) return "@" + p.source;
    std::string out;
    for (size_t i = 0; i < p.edges.size(); ++i) {
        if (i) out += " ";
        out += p.edges[i];
    }
    return out;
}

StarWitness vertex_in_S1Sm1(const GraphSpec& g, const std::string& vertex) {
    WalkView view(g);
    if (!view.has_vertex(vertex)) throw DomainError("unknown vertex '" + vertex + "'");
    if (view.is_sink(vertex))
        throw ObstructionError("vertex '" + vertex +
                               "' is a sink: it annihilates every positive-degree element, so it "
                               "has no edge-star witness");
    if (view.is_infinite_emitter(vertex))
        throw ObstructionError("vertex '" + vertex +
                               "' is an infinite emitter: its edge star has no finite sum");
    StarWitness w;
    w.vertex = vertex;
    for (auto& [eid, target] : view.out_edges(vertex)) {
        (void)target;
        w.edges.push_back(eid);
    }
    return w;
}

namespace {

// Window of a ladder spec large enough to contain every column a
// decomposition or witness mentions, with two spare columns so CK2 stars are
// complete wherever they are needed.
int window_for_columns(long long max_abs_col) {
    return static_cast<int>(std::max<long long>(2, max_abs_col + 2));
}

long long max_abs_column_of(const LadderSpec& g, const Path& p) {
    long long m = std::llabs(parse_ladder_vertex(p.source).value_or(LadderVertex{0, 0}).col);
    for (const auto& eid : p.edges) {
        auto ends = ladder_edge_endpoints(g, eid);
        if (ends) m = std::max({m, std::llabs(ends->first.col), std::llabs(ends->second.col)});
    }
    return m;
}

FiniteGraph ladder_window_for(const LadderSpec& l, const std::vector<const Path*>& paths,
                              const std::string& vertex) {
    long long m = 0;
    if (auto v = parse_ladder_vertex(vertex)) m = std::llabs(v->col);
    for (const Path* p : paths) m = std::max(m, max_abs_column_of(l, *p));
    return materialize_window(l, window_for_columns(m));
}

}  // namespace

bool verify_star_witness(const GraphSpec& g, const StarWitness& w) {
    const FiniteGraph* fg = std::get_if<FiniteGraph>(&g);
    FiniteGraph window;
    if (!fg) {
        const auto& l = std::get<LadderSpec>(g);
        std::vector<const Path*> none;
        window = ladder_window_for(l, none, w.vertex);
        fg = &window;
    }
    Element sum;
    for (const auto& eid : w.edges) {
        Element f = edge_element(*fg, eid);
        sum = sum + multiply(*fg, f, star(f));
    }
    return equals(sum, vertex_element(*fg, w.vertex));
}

TurningDecomposition decompose_source(const GraphSpec& g, const std::string& vertex,
                                      int depth_cap) {
    WalkView view(g);
    if (!view.has_vertex(vertex)) throw DomainError("unknown vertex '" + vertex + "'");
    if (view.is_sink(vertex))
        throw ObstructionError("vertex '" + vertex + "' is a sink: no decomposition exists");
    if (view.is_infinite_emitter(vertex))
        throw ObstructionError("vertex '" + vertex +
                               "' is an infinite emitter: its star cannot be expanded");

    TurningDecomposition dec;
    dec.vertex = vertex;
    std::uint64_t deepest_bad = 0;

    struct Item {
        Path path;
        std::string range;
    };
    std::deque<Item> queue;
    for (auto& [eid, target] : view.out_edges(vertex)) queue.push_back({Path{{eid}, vertex}, target});
    std::vector<Path> finals;
    while (!queue.empty()) {
        Item item = std::move(queue.front());
        queue.pop_front();
        if (view.is_turning(item.path.length(), item.range)) {
            finals.push_back(std::move(item.path));
            continue;
        }
        if (static_cast<int>(item.path.length()) >= depth_cap)
            throw CapError("expansion depth cap " + std::to_string(depth_cap) +
                           " exceeded at vertex '" + vertex +
                           "': suspected Condition (Y1) failure");
        // Expansion replaces a pair by the full out-star of its range, which
        // must be complete and nonempty.
        if (const auto* wg = std::get_if<FiniteGraph>(&g);
            wg && wg->is_boundary(wg->vertex_index(item.range)))
            throw DomainError("expansion reached the window boundary at '" + item.range +
                              "'; widen the window");
        if (view.is_sink(item.range))
            throw ObstructionError("expansion reached the sink '" + item.range +
                                   "': no decomposition exists");
        deepest_bad = std::max(deepest_bad, item.path.length());
        for (auto& [eid, target] : view.out_edges(item.range)) {
            Path ext = item.path;
            ext.edges.push_back(eid);
            queue.push_back({std::move(ext), target});
        }
    }
    dec.k = deepest_bad + 1;
    for (auto& alpha : finals) {
        auto beta = find_turning_witness(g, alpha, 1);
        if (!beta) throw Error("turning node without a witness");  // unreachable
        dec.pairs.push_back({std::move(alpha), std::move(*beta)});
    }
    return dec;
}

TurningDecomposition vertex_in_Sm1S1(const GraphSpec& g, const std::string& vertex,
                                     int depth_cap) {
    WalkView view(g);
    if (!view.has_vertex(vertex)) throw DomainError("unknown vertex '" + vertex + "'");
    if (view.is_sink(vertex))
        throw ObstructionError("vertex '" + vertex + "' is a sink: no decomposition exists");
    if (view.is_source(vertex)) return decompose_source(g, vertex, depth_cap);
    auto in = view.in_edges(vertex);
    const auto& [eid, src] = in.front();  // least incoming edge
    TurningDecomposition dec;
    dec.vertex = vertex;
    dec.k = 0;
    dec.pairs.push_back({trivial_path(vertex), Path{{eid}, src}});
    return dec;
}

bool verify_decomposition(const GraphSpec& g, const TurningDecomposition& dec) {
    // Shape checks first; a malformed decomposition is rejected without
    // evaluation.
    for (const auto& [alpha, beta] : dec.pairs) {
        if (!path_valid(g, alpha) || !path_valid(g, beta)) return false;
        if (beta.length() != alpha.length() + 1) return false;
        if (path_range(g, alpha) != path_range(g, beta)) return false;
        if (alpha.length() > dec.k) return false;
        if (alpha.source != dec.vertex) return false;  // every alpha starts at the vertex
    }
    const FiniteGraph* fg = std::get_if<FiniteGraph>(&g);
    FiniteGraph window;
    if (!fg) {
        std::vector<const Path*> paths;
        for (const auto& [alpha, beta] : dec.pairs) {
            paths.push_back(&alpha);
            paths.push_back(&beta);
        }
        window = ladder_window_for(std::get<LadderSpec>(g), paths, dec.vertex);
        fg = &window;
    }
    Element sum;
    for (const auto& [alpha, beta] : dec.pairs) {
        Element left = mono(*fg, alpha, beta);
        Element right = mono(*fg, beta, alpha);
        auto dl = is_homogeneous(left);
        auto dr = is_homogeneous(right);
        if (!left.zero() && (!dl || *dl != -1)) return false;
        if (!right.zero() && (!dr || *dr != 1)) return false;
        sum = sum + multiply(*fg, left, right);
    }
    return equals(sum, vertex_element(*fg, dec.vertex));
}

namespace {

std::string ladder_summary(const LadderSpec& l) {
    std::ostringstream os;
    os << "spine " << (l.spine == SpineKind::nat ? "nat" : "int");
    os << "; loops ";
    switch (l.loops.kind) {
        case LoopPattern::Kind::none: os << "none"; break;
        case LoopPattern::Kind::all: os << "all"; break;
        case LoopPattern::Kind::cols: os << "on " << l.loops.cols.size() << " columns"; break;
        case LoopPattern::Kind::from:
            os << "from " << l.loops.start << " step " << l.loops.step;
            break;
    }
    os << "; " << l.families.size() << (l.families.size() == 1 ? " tail family" : " tail families");
    if (!l.exceptions.empty()) os << "; " << l.exceptions.size() << " tail exceptions";
    return os.str();
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

std::string describe_y(const YVerdict& v) {
    switch (v.status) {
        case YStatus::holds: return "holds (" + v.reason_label() + ")";
        case YStatus::fails: {
            std::string s = "fails";
            if (v.counterexample)
                s += " (k=" + std::to_string(v.counterexample->k) + " from " +
                     v.counterexample->start_vertex + ", " + v.counterexample->tag + ")";
            return s;
        }
        case YStatus::unknown: return "unknown";
    }
    return "unknown";
}

}  // namespace

AnalysisReport strong_grading_verdict(const GraphSpec& g) {
    AnalysisReport r;
    r.condition_Y = check_condition_Y(g);
    r.condition_Y1 = check_condition_Y1(g);

    const auto* fg = std::get_if<FiniteGraph>(&g);
    bool windowed = false;
    if (fg) {
        r.graph.kind = "finite";
        r.graph.vertices = fg->vertex_count();
        r.graph.edges = fg->edge_count();
        r.row_finite = fg->row_finite();
        for (int v : fg->sinks()) {
            if (fg->is_boundary(v)) {
                windowed = true;
                continue;  // truncation sink, not a sink of the described graph
            }
            r.sinks.push_back(fg->vertex(v).id);
        }
        for (int v = 0; v < fg->vertex_count(); ++v)
            if (fg->is_boundary(v)) windowed = true;
        for (int v : fg->infinite_emitters()) r.infinite_emitters.push_back(fg->vertex(v).id);
    } else {
        const auto& l = std::get<LadderSpec>(g);
        r.graph.kind = "ladder";
        r.graph.summary = ladder_summary(l);
        r.row_finite = true;
        r.sinks_none_certified = true;
    }

    bool no_sink = r.sinks.empty();
    bool y_holds = r.condition_Y.status == YStatus::holds;
    bool y_unknown = r.condition_Y.status == YStatus::unknown;
    if (!no_sink || !r.row_finite || r.condition_Y.status == YStatus::fails)
        r.strongly_graded = Graded::no;
    else if (y_unknown)
        r.strongly_graded = Graded::unknown;
    else
        r.strongly_graded = Graded::yes;

    if (no_sink)
        r.reasons.push_back(r.sinks_none_certified ? "sinks: none (by construction)"
                                                   : "sinks: none");
    else
        r.reasons.push_back("sink: " + join(r.sinks, ", "));
    if (r.row_finite)
        r.reasons.push_back("row-finite: yes");
    else
        r.reasons.push_back("infinite emitter: " + join(r.infinite_emitters, ", "));
    r.reasons.push_back("condition-Y: " + describe_y(r.condition_Y));
    r.reasons.push_back("condition-Y1: " + describe_y(r.condition_Y1));

    // Double certification for explicit finite graphs: every vertex gets an
    // engine-verified witness on each side. Window graphs are skipped (their
    // boundary stars are incomplete).
    if (fg && r.strongly_graded == Graded::yes && !windowed && y_holds) {
        for (int v = 0; v < fg->vertex_count(); ++v) {
            const std::string id = fg->vertex(v).id;
            VertexWitness w;
            w.vertex = id;
            bool ok = true;
            try {
                StarWitness sw = vertex_in_S1Sm1(g, id);
                ok = verify_star_witness(g, sw);
                TurningDecomposition dec = vertex_in_Sm1S1(g, id);
                w.pairs = dec.pairs;
                w.k = dec.k;
                ok = ok && verify_decomposition(g, dec);
            } catch (const Error&) {
                ok = false;
            }
            w.verified = ok;
            r.witnesses.push_back(std::move(w));
        }
    }
    return r;
}

bool proposition21_reduction_check(const FiniteGraph& g, int sample_size, std::uint64_t seed) {
    for (int v : g.sinks())
        if (!g.is_boundary(v)) return false;  // v S1 S-1 = 0 at a sink

    std::mt19937_64 rng(seed);
    auto paths = enumerate_paths(g, 3);
    // bucket paths by range vertex
    std::vector<std::vector<Path>> by_range(static_cast<size_t>(g.vertex_count()));
    GraphSpec gs(g);
    for (const auto& p : paths)
        by_range[static_cast<size_t>(g.vertex_index(path_range(gs, p)))].push_back(p);

    auto random_homogeneous = [&](long long deg) -> Element {
        Element x;
        for (int tries = 0; tries < 32 && x.term_count() < 2; ++tries) {
            auto v = static_cast<size_t>(rng() % static_cast<std::uint64_t>(g.vertex_count()));
            const auto& bucket = by_range[v];
            if (bucket.empty()) continue;
            const Path& alpha = bucket[rng() % bucket.size()];
            const Path& beta = bucket[rng() % bucket.size()];
            if (static_cast<long long>(alpha.length()) - static_cast<long long>(beta.length()) !=
                deg)
                continue;
            Coeff c = static_cast<long long>(rng() % 5) - 2;
            if (c == 0) c = 1;
            x = x + mono(g, alpha, beta).scaled(c);
        }
        return normal_form(g, x);
    };

    // Product degrees across the four sign cases.
    const long long degs[4][2] = {{1, 2}, {-1, -2}, {2, -1}, {-2, 1}};
    int trials = std::max(4, sample_size);
    for (int t = 0; t < trials; ++t) {
        const auto& [dn, dm] = degs[t % 4];
        Element x = random_homogeneous(dn);
        Element y = random_homogeneous(dm);
        Element p = multiply(g, x, y);
        auto d = is_homogeneous(p);
        if (!p.zero() && (!d || *d != dn + dm)) return false;
    }

    // Every short degree-0 basis monomial factors through the vertex
    // witnesses on both sides. The right local unit of alpha beta^star is
    // s(beta), which is where the witness is inserted.
    for (const auto& alpha : paths) {
        if (alpha.length() > 2) continue;
        std::string range = path_range(gs, alpha);
        for (const auto& beta : by_range[static_cast<size_t>(g.vertex_index(range))]) {
            if (beta.length() != alpha.length()) continue;
            Element m = mono(g, alpha, beta);
            if (m.term_count() != 1) continue;
            const Monomial& term = m.terms().begin()->first;
            if (ipath_to_path(g, term.alpha) != alpha || ipath_to_path(g, term.beta) != beta)
                continue;  // only basis monomials
            std::string w = beta.source;
            if (g.is_boundary(g.vertex_index(w))) continue;  // star incomplete in a window
            // S1 S-1 route via w = sum ff^star
            StarWitness sw = vertex_in_S1Sm1(gs, w);
            Element s1sm1;
            for (const auto& eid : sw.edges) {
                Element left = multiply(g, m, edge_element(g, eid));
                Element right = ghost_element(g, eid);
                auto dl = is_homogeneous(left);
                if (!left.zero() && (!dl || *dl != 1)) return false;
                s1sm1 = s1sm1 + multiply(g, left, right);
            }
            if (!equals(s1sm1, m)) return false;
            // S-1 S1 route via the turning decomposition of w
            TurningDecomposition dec = vertex_in_Sm1S1(gs, w);
            Element sm1s1;
            for (const auto& [a, b] : dec.pairs) {
                Element left = multiply(g, m, mono(g, a, b));
                Element right = mono(g, b, a);
                auto dl = is_homogeneous(left);
                if (!left.zero() && (!dl || *dl != -1)) return false;
                sm1s1 = sm1s1 + multiply(g, left, right);
            }
            if (!equals(sm1s1, m)) return false;
        }
    }
    return true;
}

nlohmann::ordered_json report_to_json(const AnalysisReport& r) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json graph;
    graph["kind"] = r.graph.kind;
    if (r.graph.kind == "finite") {
        graph["vertices"] = r.graph.vertices;
        graph["edges"] = r.graph.edges;
    } else {
        graph["summary"] = r.graph.summary;
    }
    j["graph"] = graph;
    j["row_finite"] = r.row_finite;
    j["sinks"] = r.sinks;
    j["infinite_emitters"] = r.infinite_emitters;
    auto yjson = [](const YVerdict& v) {
        nlohmann::ordered_json y;
        switch (v.status) {
            case YStatus::holds: y["status"] = "holds"; break;
            case YStatus::fails: y["status"] = "fails"; break;
            case YStatus::unknown: y["status"] = "unknown"; break;
        }
        y["reason"] = v.reason_label();
        if (v.counterexample) {
            y["counterexample_k"] = v.counterexample->k;
            y["start"] = v.counterexample->start_vertex;
        }
        return y;
    };
    j["condition_Y"] = yjson(r.condition_Y);
    j["condition_Y1"] = yjson(r.condition_Y1);
    switch (r.strongly_graded) {
        case Graded::yes: j["strongly_graded"] = "yes"; break;
        case Graded::no: j["strongly_graded"] = "no"; break;
        case Graded::unknown: j["strongly_graded"] = "unknown"; break;
    }
    if (!r.witnesses.empty()) {
        nlohmann::ordered_json ws = nlohmann::ordered_json::array();
        for (const auto& w : r.witnesses) {
            nlohmann::ordered_json wj;
            wj["vertex"] = w.vertex;
            nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
            for (const auto& [alpha, beta] : w.pairs) {
                nlohmann::ordered_json pj;
                pj["alpha"] = path_text(alpha);
                pj["beta"] = path_text(beta);
                pairs.push_back(pj);
            }
            wj["pairs"] = pairs;
            wj["k"] = w.k;
            wj["verified"] = w.verified;
            ws.push_back(wj);
        }
        j["witnesses"] = ws;
    }
    return j;
}

std::string report_to_text(const AnalysisReport& r) {
    std::ostringstream os;
    if (r.graph.kind == "finite")
        os << "graph: finite, " << r.graph.vertices << " vertices, " << r.graph.edges
           << " edges\n";
    else
        os << "graph: ladder (" << r.graph.summary << ")\n";
    for (const auto& line : r.reasons) os << "  " << line << "\n";
    os << "strongly Z-graded: ";
    switch (r.strongly_graded) {
        case Graded::yes: os << "yes"; break;
        case Graded::no: os << "no"; break;
        case Graded::unknown: os << "unknown"; break;
    }
    os << "\n";
    if (!r.witnesses.empty()) {
        size_t verified = 0;
        for (const auto& w : r.witnesses)
            if (w.verified) ++verified;
        os << "witnesses: " << verified << "/" << r.witnesses.size()
           << " vertices certified on both sides\n";
    }
    return os.str();
}

}  // namespace lpa
