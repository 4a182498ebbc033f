#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lpa/graph.hpp"
#include "lpa/path_analysis.hpp"

namespace lpa {

using Coeff = boost::multiprecision::cpp_int;

namespace detail {
/// Path over interned edge indices; edge indices are sorted by id, so index
/// order is id order. source is the vertex index (the whole path when edges
/// is empty).
struct IPath {
    std::vector<std::int32_t> edges;
    std::int32_t source = -1;

    auto operator<=>(const IPath&) const = default;
};
}  // namespace detail

/// alpha * beta^star with r(alpha) == r(beta); a vertex is the case of two
/// empty paths. degree = |alpha| - |beta|.
struct Monomial {
    detail::IPath alpha, beta;

    long long degree() const {
        return static_cast<long long>(alpha.edges.size()) -
               static_cast<long long>(beta.edges.size());
    }
    std::uint64_t total_length() const { return alpha.edges.size() + beta.edges.size(); }

    bool operator==(const Monomial&) const = default;
};

/// Total monomial order: (|alpha| + |beta|, alpha lex, beta lex).
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.total_length() != b.total_length()) return a.total_length() < b.total_length();
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return a.beta < b.beta;
    }
};

/// Formal integer combination of monomials, kept sorted with no zero
/// coefficients. Every Element returned by the public operations is in
/// normal form; sums and differences of normal forms stay normal, so
/// structural equality is semantic equality.
class Element {
public:
    using Terms = std::map<Monomial, Coeff, MonomialOrder>;

    const Terms& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const Monomial& m, const Coeff& c);

    Element operator+(const Element& other) const;
    Element operator-(const Element& other) const;
    Element operator-() const;
    Element scaled(const Coeff& c) const;

    bool operator==(const Element&) const = default;

private:
    Terms terms_;
};

detail::IPath path_to_ipath(const FiniteGraph& g, const Path& p);
Path ipath_to_path(const FiniteGraph& g, const detail::IPath& p);

/// The single-term element alpha * beta^star, or zero when the ranges
/// differ; result is in normal form.
Element mono(const FiniteGraph& g, const Path& alpha, const Path& beta);

Element vertex_element(const FiniteGraph& g, const std::string& vertex);
Element edge_element(const FiniteGraph& g, const std::string& edge);
Element ghost_element(const FiniteGraph& g, const std::string& edge);

Element multiply(const FiniteGraph& g, const Element& x, const Element& y);

/// Canonical representative. The rewrite eliminates every monomial whose
/// alpha and beta both end in the designated least out-edge of their shared
/// penultimate vertex, replacing alpha0 e (beta0 e)^star by
/// alpha0 beta0^star - sum over the other edges f of that star of
/// (alpha0 f)(beta0 f)^star. Vertices whose star is not fully known
/// (infinite emitters, window boundaries) never rewrite.
Element normal_form(const FiniteGraph& g, const Element& x);

bool is_zero(const Element& x);
bool equals(const Element& x, const Element& y);

Element degree_component(const Element& x, long long n);
std::optional<long long> is_homogeneous(const Element& x);

/// (alpha beta^star)^star = beta alpha^star; involution, coefficients fixed.
Element star(const Element& x);

/// Grammar: element := term (("+"|"-") term)*; term := (int "*")? mono;
/// mono := vertex-id | "(" pathseq "|" pathseq ")";
/// pathseq := edge-id+ | "@" vertex-id.
/// A mono with mismatched ranges parses to 0 and appends a warning.
Element parse_element(const FiniteGraph& g, const std::string& text,
                      std::vector<std::string>* warnings = nullptr);

std::string print_element(const FiniteGraph& g, const Element& x);
std::string print_path(const FiniteGraph& g, const detail::IPath& p);

namespace detail {
/// normal_form with an explicit choice of which reducible term to rewrite
/// next (used to exercise rewrite-order independence). pick(n) returns an
/// index in [0, n).
Element normal_form_with_picker(const FiniteGraph& g, Element x,
                                const std::function<std::size_t(std::size_t)>& pick);
bool monomial_reducible(const FiniteGraph& g, const Monomial& m);
}  // namespace detail

/// All paths of length <= max_len, sorted (trivial paths first).
std::vector<Path> enumerate_paths(const FiniteGraph& g, std::uint64_t max_len);

}  // namespace lpa
