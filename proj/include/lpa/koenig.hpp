#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lpa/errors.hpp"

namespace lpa::koenig {

/// A system of finite levels X_1, X_2, ... with total maps step(n) from
/// level n+1 into level n. Items are opaque to this module: only the
/// caller-supplied ordering (for deterministic tie-breaks) and equality
/// through it are used. Levels beyond max_level are never materialized.
template <class Item>
struct LevelSystem {
    std::function<std::vector<Item>(int)> level;        // n >= 1
    std::function<Item(int, const Item&)> step;         // maps level n+1 -> level n
    int max_level = 0;
};

struct EmptyLevelError : Error {
    explicit EmptyLevelError(int level_)
        : Error("level " + std::to_string(level_) + " is empty"), level(level_) {}
    int level;
};

struct HorizonError : Error {
    using Error::Error;
};

template <class Item, class Less = std::less<Item>>
struct Cores {
    // cores[n-1] is the stabilized subset of level n, for n = 1..depth.
    std::vector<std::set<Item, Less>> cores;
    // true when two consecutive sweeps agreed before the depth limit; false
    // means the cores are the deepest-available backward images, which still
    // satisfy step(n)(cores[n]) == cores[n-1] exactly.
    bool stabilized = false;
    // number of levels the computation actually materialized
    int materialized = 0;
};

namespace detail {

template <class Item, class Less>
std::vector<std::set<Item, Less>> backward_sweep(const std::vector<std::vector<Item>>& levels,
                                                 const LevelSystem<Item>& sys, int from, int depth,
                                                 const Less& less) {
    // anc[n-1] = image of level `from` inside level n, for n <= min(from, depth)
    std::vector<std::set<Item, Less>> anc(static_cast<size_t>(depth), std::set<Item, Less>(less));
    std::set<Item, Less> cur(less);
    for (const Item& x : levels[static_cast<size_t>(from - 1)]) cur.insert(x);
    if (from <= depth) anc[static_cast<size_t>(from - 1)] = cur;
    for (int n = from - 1; n >= 1; --n) {
        std::set<Item, Less> prev(less);
        for (const Item& x : cur) prev.insert(sys.step(n, x));
        cur = std::move(prev);
        if (n <= depth) anc[static_cast<size_t>(n - 1)] = cur;
    }
    return anc;
}

template <class Item, class Less>
bool sets_equal(const std::vector<std::set<Item, Less>>& a,
                const std::vector<std::set<Item, Less>>& b, const Less& less) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        auto it = a[i].begin();
        auto jt = b[i].begin();
        for (; it != a[i].end(); ++it, ++jt)
            if (less(*it, *jt) || less(*jt, *it)) return false;
    }
    return true;
}

}  // namespace detail

/// Computes, for n = 1..depth, the non-increasing chain of backward images of
/// ever deeper levels, stopping as soon as two consecutive sweeps agree on
/// all requested levels (or the system's materialization depth runs out).
/// The returned sets Z satisfy step(n)(Z_{n+1}) = Z_n exactly in both cases.
template <class Item, class Less>
Cores<Item, Less> stabilized_cores(const LevelSystem<Item>& sys, int depth, Less less) {
    if (depth < 1) throw Error("core depth must be at least 1");
    if (depth > sys.max_level) throw Error("core depth exceeds the materialization bound");

    std::vector<std::vector<Item>> levels;
    auto materialize_to = [&](int n) {
        while (static_cast<int>(levels.size()) < n) {
            int k = static_cast<int>(levels.size()) + 1;
            levels.push_back(sys.level(k));
            if (levels.back().empty()) throw EmptyLevelError(k);
        }
    };

    materialize_to(depth);
    std::size_t total = 0;
    for (const auto& lv : levels) total += lv.size();
    std::size_t cap = 2 + total;

    Cores<Item, Less> result;
    std::vector<std::set<Item, Less>> prev;
    int from = depth;
    for (std::size_t iter = 0;; ++iter) {
        auto anc = detail::backward_sweep(levels, sys, from, depth, less);
        if (iter > 0 && detail::sets_equal(anc, prev, less)) {
            result.cores = std::move(anc);
            result.stabilized = true;
            result.materialized = from;
            return result;
        }
        prev = std::move(anc);
        if (from == sys.max_level) {
            result.cores = std::move(prev);
            result.stabilized = false;
            result.materialized = from;
            return result;
        }
        if (iter > cap) throw HorizonError("core stabilization exceeded its horizon");
        ++from;
        materialize_to(from);
    }
}

template <class Item>
Cores<Item, std::less<Item>> stabilized_cores(const LevelSystem<Item>& sys, int depth) {
    return stabilized_cores(sys, depth, std::less<Item>());
}

/// Extracts a coherent thread (x_1, ..., x_depth) with step(n)(x_{n+1}) = x_n,
/// taking the least admissible item at every stage. Throws EmptyLevelError
/// when some level up to `depth` is empty (no such thread exists).
template <class Item, class Less>
std::vector<Item> extract_thread(const LevelSystem<Item>& sys, int depth, Less less) {
    auto cores = stabilized_cores(sys, depth, less);
    std::vector<Item> thread;
    thread.reserve(static_cast<size_t>(depth));
    const auto& z1 = cores.cores[0];
    thread.push_back(*z1.begin());
    for (int n = 1; n < depth; ++n) {
        const auto& zn1 = cores.cores[static_cast<size_t>(n)];
        const Item& want = thread.back();
        bool found = false;
        for (const Item& cand : zn1) {
            Item parent = sys.step(n, cand);
            if (!less(parent, want) && !less(want, parent)) {
                thread.push_back(cand);
                found = true;
                break;
            }
        }
        if (!found) throw Error("core chain lost coherence");  // unreachable by construction
    }
    return thread;
}

template <class Item>
std::vector<Item> extract_thread(const LevelSystem<Item>& sys, int depth) {
    return extract_thread(sys, depth, std::less<Item>());
}

}  // namespace lpa::koenig
