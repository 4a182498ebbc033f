#include "lpa/element.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lpa {

void Element::add_term(const Monomial& m, const Coeff& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Element Element::operator+(const Element& other) const {
    Element out = *this;
    for (const auto& [m, c] : other.terms_) out.add_term(m, c);
    return out;
}

Element Element::operator-(const Element& other) const {
    Element out = *this;
    for (const auto& [m, c] : other.terms_) out.add_term(m, -c);
    return out;
}

Element Element::operator-() const {
    Element out;
    for (const auto& [m, c] : terms_) out.add_term(m, -c);
    return out;
}

Element Element::scaled(const Coeff& c) const {
    Element out;
    for (const auto& [m, k] : terms_) out.add_term(m, k * c);
    return out;
}

detail::IPath path_to_ipath(const FiniteGraph& g, const Path& p) {
    detail::IPath out;
    int v = g.find_vertex(p.source);
    if (v < 0) throw DomainError("invalid path: unknown vertex '" + p.source + "'");
    out.source = v;
    int cur = v;
    for (const auto& eid : p.edges) {
        int e = g.find_edge(eid);
        if (e < 0) throw DomainError("invalid path: unknown edge '" + eid + "'");
        if (g.edge_src(e) != cur)
            throw DomainError("invalid path: edge '" + eid + "' does not continue the path");
        out.edges.push_back(e);
        cur = g.edge_dst(e);
    }
    return out;
}

Path ipath_to_path(const FiniteGraph& g, const detail::IPath& p) {
    Path out;
    out.source = g.vertex(p.source).id;
    for (auto e : p.edges) out.edges.push_back(g.edge(e).id);
    return out;
}

namespace {

int ipath_range(const FiniteGraph& g, const detail::IPath& p) {
    return p.edges.empty() ? p.source : g.edge_dst(p.edges.back());
}

bool ck2_enabled(const FiniteGraph& g, int v) {
    return !g.is_sink(v) && !g.is_infinite_emitter(v) && !g.is_boundary(v);
}

}  // namespace

namespace detail {

bool monomial_reducible(const FiniteGraph& g, const Monomial& m) {
    if (m.alpha.edges.empty() || m.beta.edges.empty()) return false;
    int e = m.alpha.edges.back();
    if (m.beta.edges.back() != e) return false;
    int w = g.edge_src(e);
    if (!ck2_enabled(g, w)) return false;
    return g.out_edges(w).front() == e;  // the least out-edge is the special one
}

Element normal_form_with_picker(const FiniteGraph& g, Element x,
                                const std::function<std::size_t(std::size_t)>& pick) {
    for (;;) {
        std::vector<Monomial> reducible;
        for (const auto& [m, c] : x.terms())
            if (monomial_reducible(g, m)) reducible.push_back(m);
        if (reducible.empty()) return x;
        const Monomial m = reducible[pick(reducible.size())];
        Coeff c = x.terms().at(m);
        x.add_term(m, -c);
        int e = m.alpha.edges.back();
        int w = g.edge_src(e);
        Monomial contracted;
        contracted.alpha = m.alpha;
        contracted.alpha.edges.pop_back();
        contracted.beta = m.beta;
        contracted.beta.edges.pop_back();
        x.add_term(contracted, c);
        for (int f : g.out_edges(w)) {
            if (f == e) continue;
            Monomial sibling;
            sibling.alpha = contracted.alpha;
            sibling.alpha.edges.push_back(f);
            sibling.beta = contracted.beta;
            sibling.beta.edges.push_back(f);
            x.add_term(sibling, -c);
        }
    }
}

}  // namespace detail

Element normal_form(const FiniteGraph& g, const Element& x) {
    return detail::normal_form_with_picker(g, x, [](std::size_t) { return 0; });
}

Element mono(const FiniteGraph& g, const Path& alpha, const Path& beta) {
    detail::IPath a = path_to_ipath(g, alpha);
    detail::IPath b = path_to_ipath(g, beta);
    Element out;
    if (ipath_range(g, a) != ipath_range(g, b)) return out;  // zero
    Monomial m;
    m.alpha = std::move(a);
    m.beta = std::move(b);
    out.add_term(m, 1);
    return normal_form(g, out);
}

Element vertex_element(const FiniteGraph& g, const std::string& vertex) {
    Path p = trivial_path(vertex);
    return mono(g, p, p);
}

Element edge_element(const FiniteGraph& g, const std::string& edge) {
    int e = g.edge_index(edge);
    Path alpha{{edge}, g.edge(e).src};
    Path beta = trivial_path(g.edge(e).dst);
    return mono(g, alpha, beta);
}

Element ghost_element(const FiniteGraph& g, const std::string& edge) {
    int e = g.edge_index(edge);
    Path alpha = trivial_path(g.edge(e).dst);
    Path beta{{edge}, g.edge(e).src};
    return mono(g, alpha, beta);
}

Element multiply(const FiniteGraph& g, const Element& x, const Element& y) {
    Element out;
    for (const auto& [mx, cx] : x.terms()) {
        for (const auto& [my, cy] : y.terms()) {
            const detail::IPath& b = mx.beta;
            const detail::IPath& c = my.alpha;
            if (b.source != c.source) continue;
            const bool b_prefix = b.edges.size() <= c.edges.size() &&
                                  std::equal(b.edges.begin(), b.edges.end(), c.edges.begin());
            if (b_prefix) {
                Monomial prod;
                prod.alpha = mx.alpha;
                prod.alpha.edges.insert(prod.alpha.edges.end(),
                                        c.edges.begin() + static_cast<long>(b.edges.size()),
                                        c.edges.end());
                prod.beta = my.beta;
                out.add_term(prod, cx * cy);
                continue;
            }
            const bool c_prefix = c.edges.size() < b.edges.size() &&
                                  std::equal(c.edges.begin(), c.edges.end(), b.edges.begin());
            if (c_prefix) {
                Monomial prod;
                prod.alpha = mx.alpha;
                prod.beta = my.beta;
                prod.beta.edges.insert(prod.beta.edges.end(),
                                       b.edges.begin() + static_cast<long>(c.edges.size()),
                                       b.edges.end());
                out.add_term(prod, cx * cy);
            }
        }
    }
    return normal_form(g, out);
}

bool is_zero(const Element& x) { return x.zero(); }

bool equals(const Element& x, const Element& y) { return x == y; }

Element degree_component(const Element& x, long long n) {
    Element out;
    for (const auto& [m, c] : x.terms())
        if (m.degree() == n) out.add_term(m, c);
    return out;
}

std::optional<long long> is_homogeneous(const Element& x) {
    std::optional<long long> deg;
    for (const auto& [m, c] : x.terms()) {
        (void)c;
        if (!deg)
            deg = m.degree();
        else if (*deg != m.degree())
            return std::nullopt;
    }
    if (!deg) return 0;  // the zero element is homogeneous of every degree; report 0
    return deg;
}

Element star(const Element& x) {
    Element out;
    for (const auto& [m, c] : x.terms()) {
        Monomial s;
        s.alpha = m.beta;
        s.beta = m.alpha;
        out.add_term(s, c);
    }
    return out;
}

std::string print_path(const FiniteGraph& g, const detail::IPath& p) {
    if (p.edges.empty()) return "@" + g.vertex(p.source).id;
    std::string out;
    for (size_t i = 0; i < p.edges.size(); ++i) {
        if (i) out += " ";
        out += g.edge(p.edges[i]).id;
    }
    return out;
}

std::string print_element(const FiniteGraph& g, const Element& x) {
    if (x.zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : x.terms()) {
        Coeff mag = c < 0 ? Coeff(-c) : c;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        std::string body;
        if (m.alpha.edges.empty() && m.beta.edges.empty() && m.alpha.source == m.beta.source) {
            body = g.vertex(m.alpha.source).id;
        } else {
            body = "(" + print_path(g, m.alpha) + "|" + print_path(g, m.beta) + ")";
        }
        if (mag != 1) os << mag.str() << "*";
        os << body;
    }
    return os.str();
}

namespace {

struct ETok {
    enum class Kind { ident, number, punct, end };
    Kind kind = Kind::end;
    std::string text;
    Coeff value;
    int pos = 0;
};

class ELexer {
public:
    explicit ELexer(const std::string& s) : s_(s) { advance(); }
    const ETok& peek() const { return tok_; }
    ETok next() {
        ETok t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_ = ETok{};
        tok_.pos = static_cast<int>(i_) + 1;
        if (i_ >= s_.size()) return;
        char c = s_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i_;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            tok_.kind = ETok::Kind::ident;
            tok_.text = s_.substr(start, i_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            tok_.kind = ETok::Kind::number;
            tok_.text = s_.substr(start, i_ - start);
            // leading zeros would read as an octal prefix
            size_t nz = tok_.text.find_first_not_of('0');
            tok_.value = Coeff(nz == std::string::npos ? "0" : tok_.text.substr(nz));
            return;
        }
        static const std::string punct = "()|*+-@";
        if (punct.find(c) != std::string::npos) {
            ++i_;
            tok_.kind = ETok::Kind::punct;
            tok_.text = std::string(1, c);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "' in element expression",
                         1, tok_.pos);
    }

    const std::string& s_;
    size_t i_ = 0;
    ETok tok_;
};

class EParser {
public:
    EParser(const FiniteGraph& g, const std::string& text, std::vector<std::string>* warnings)
        : g_(g), lex_(text), warnings_(warnings) {}

    Element parse() {
        Element acc;
        Coeff sign = 1;
        if (is_punct("+") || is_punct("-")) sign = lex_.next().text == "-" ? -1 : 1;
        acc = acc + term().scaled(sign);
        while (is_punct("+") || is_punct("-")) {
            sign = lex_.next().text == "-" ? -1 : 1;
            acc = acc + term().scaled(sign);
        }
        if (lex_.peek().kind != ETok::Kind::end)
            throw ParseError("trailing input in element expression", 1, lex_.peek().pos);
        return normal_form(g_, acc);
    }

private:
    bool is_punct(const char* p) const {
        return lex_.peek().kind == ETok::Kind::punct && lex_.peek().text == p;
    }

    Element term() {
        Coeff coeff = 1;
        if (lex_.peek().kind == ETok::Kind::number) {
            coeff = lex_.next().value;
            if (!is_punct("*"))
                throw ParseError("expected '*' after coefficient", 1, lex_.peek().pos);
            lex_.next();
        }
        return mono_expr().scaled(coeff);
    }

    Element mono_expr() {
        const ETok& t = lex_.peek();
        if (t.kind == ETok::Kind::ident) {
            ETok id = lex_.next();
            if (g_.find_vertex(id.text) < 0)
                throw ParseError("unknown vertex '" + id.text + "'", 1, id.pos);
            return vertex_element(g_, id.text);
        }
        if (is_punct("(")) {
            lex_.next();
            Path alpha = pathseq();
            if (!is_punct("|")) throw ParseError("expected '|'", 1, lex_.peek().pos);
            lex_.next();
            Path beta = pathseq();
            if (!is_punct(")")) throw ParseError("expected ')'", 1, lex_.peek().pos);
            lex_.next();
            Element m = mono(g_, alpha, beta);
            if (m.zero() && warnings_)
                warnings_->push_back("monomial has mismatched path ranges; it is 0");
            return m;
        }
        throw ParseError("expected a vertex id or '('", 1, t.pos);
    }

    Path pathseq() {
        if (is_punct("@")) {
            lex_.next();
            ETok id = lex_.next();
            if (id.kind != ETok::Kind::ident || g_.find_vertex(id.text) < 0)
                throw ParseError("expected a vertex id after '@'", 1, id.pos);
            return trivial_path(id.text);
        }
        Path p;
        bool any = false;
        while (lex_.peek().kind == ETok::Kind::ident) {
            ETok id = lex_.next();
            int e = g_.find_edge(id.text);
            if (e < 0) throw ParseError("unknown edge '" + id.text + "'", 1, id.pos);
            if (!any) p.source = g_.edge(e).src;
            p.edges.push_back(id.text);
            any = true;
        }
        if (!any) throw ParseError("expected a path", 1, lex_.peek().pos);
        if (!path_valid(GraphSpec(g_), p))
            throw ParseError("edges do not compose into a path", 1, lex_.peek().pos);
        return p;
    }

    const FiniteGraph& g_;
    ELexer lex_;
    std::vector<std::string>* warnings_;
};

}  // namespace

Element parse_element(const FiniteGraph& g, const std::string& text,
                      std::vector<std::string>* warnings) {
    return EParser(g, text, warnings).parse();
}

std::vector<Path> enumerate_paths(const FiniteGraph& g, std::uint64_t max_len) {
    std::vector<Path> out;
    std::vector<std::pair<Path, int>> frontier;
    for (int v = 0; v < g.vertex_count(); ++v) {
        out.push_back(trivial_path(g.vertex(v).id));
        frontier.emplace_back(out.back(), v);
    }
    for (std::uint64_t len = 1; len <= max_len; ++len) {
        std::vector<std::pair<Path, int>> next;
        for (const auto& [p, range] : frontier) {
            for (int e : g.out_edges(range)) {
                Path ext = p;
                ext.edges.push_back(g.edge(e).id);
                out.push_back(ext);
                next.emplace_back(std::move(ext), g.edge_dst(e));
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return out;
}

}  // namespace lpa
