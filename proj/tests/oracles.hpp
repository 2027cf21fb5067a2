#pragma once

// Reference implementations used only by the tests.  Everything here is
// recomputed from first principles (word arithmetic, orbit walks, repeated
// application) so a library regression cannot hide behind shared code.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "arbor/automorphism.hpp"
#include "arbor/expr.hpp"
#include "arbor/shape.hpp"

namespace oracle {

using arbor::LevelMap;
using arbor::TreeShape;
using arbor::TruncatedAutomorphism;
using arbor::VertexIndex;

/// Word of a level-n vertex, letters from level 1 outward.
inline std::vector<std::uint32_t> word_digits(const TreeShape& shape, VertexIndex v, int n) {
    std::vector<std::uint32_t> w(static_cast<std::size_t>(n));
    for (int i = n; i >= 1; --i) {
        w[static_cast<std::size_t>(i) - 1] = static_cast<std::uint32_t>(v % shape.factor(i));
        v /= shape.factor(i);
    }
    return w;
}

inline VertexIndex word_index(const TreeShape& shape, const std::vector<std::uint32_t>& w) {
    VertexIndex v = 0;
    for (int i = 1; i <= static_cast<int>(w.size()); ++i)
        v = v * shape.factor(i) + w[static_cast<std::size_t>(i) - 1];
    return v;
}

/// Adding machine built directly from the carry rule: the level-1 letter is
/// least significant and increments first.
inline TruncatedAutomorphism successor_truncation(const TreeShape& shape, int depth) {
    std::vector<LevelMap> levels;
    for (int n = 1; n <= depth; ++n) {
        VertexIndex size = shape.level_size(n);
        LevelMap map(size);
        for (VertexIndex v = 0; v < size; ++v) {
            std::vector<std::uint32_t> w = word_digits(shape, v, n);
            for (int i = 0; i < n; ++i) {
                if (w[static_cast<std::size_t>(i)] + 1u < shape.factor(i + 1)) {
                    w[static_cast<std::size_t>(i)] += 1;
                    break;
                }
                w[static_cast<std::size_t>(i)] = 0;
            }
            map[v] = word_index(shape, w);
        }
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(shape.truncated(depth), std::move(levels));
}

inline bool is_identity_map(const LevelMap& map) {
    for (VertexIndex v = 0; v < map.size(); ++v)
        if (map[v] != v) return false;
    return true;
}

/// Order by repeated application.
inline std::uint64_t brute_order(const LevelMap& map, std::uint64_t cap = 1u << 20) {
    LevelMap cur = map;
    std::uint64_t order = 1;
    while (!is_identity_map(cur)) {
        LevelMap next(cur.size());
        for (VertexIndex v = 0; v < cur.size(); ++v) next[v] = map[cur[v]];
        cur = std::move(next);
        if (++order > cap) throw std::runtime_error("order exceeds the oracle cap");
    }
    return order;
}

inline std::uint64_t orbit_length(const LevelMap& map, VertexIndex v) {
    std::uint64_t len = 1;
    for (VertexIndex j = map[v]; j != v; j = map[j]) ++len;
    return len;
}

/// Parity from the inversion count; quadratic, keep sizes modest.
inline int inversion_sign(const LevelMap& map) {
    std::uint64_t inversions = 0;
    for (std::size_t i = 0; i < map.size(); ++i)
        for (std::size_t j = i + 1; j < map.size(); ++j)
            if (map[i] > map[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

/// Stability through the budget, straight from the definition: at each deeper
/// level the lifts of the cycle through v must form one orbit of the full
/// lifted length.  The orbit of one lift stays above the cycle, so a length
/// count settles the question.
inline bool naive_stable(const TruncatedAutomorphism& u, int n, VertexIndex v, int budget) {
    std::uint64_t k = orbit_length(u.level(n), v);
    VertexIndex lift = v;
    std::uint64_t lifted = k;
    for (int m = n + 1; m <= budget; ++m) {
        lift = lift * u.shape().factor(m);  // v extended by a zero letter
        lifted *= u.shape().factor(m);
        if (orbit_length(u.level(m), lift) != lifted) return false;
    }
    return true;
}

inline std::uint64_t naive_stable_count(const TruncatedAutomorphism& u, int n, int budget) {
    std::uint64_t count = 0;
    for (VertexIndex v = 0; v < u.shape().level_size(n); ++v)
        if (naive_stable(u, n, v, budget)) ++count;
    return count;
}

/// Image of a word under an inverse-free expression, by direct recursion on
/// the word.  Terminates for level-contracting environments because a tuple
/// consumes one letter before any reference re-expands.
inline std::vector<std::uint32_t> expr_image(const arbor::RecursionEnv& env,
                                             const arbor::ExprPtr& e,
                                             std::vector<std::uint32_t> word) {
    using K = arbor::ElementExpr::Kind;
    switch (e->kind) {
        case K::Identity:
            return word;
        case K::RootPerm:
            if (!word.empty()) word[0] = e->perm[word[0]];
            return word;
        case K::Tuple: {
            if (word.empty()) return word;
            std::uint32_t head = word[0];
            std::vector<std::uint32_t> rest(word.begin() + 1, word.end());
            rest = expr_image(env, e->args[head], std::move(rest));
            std::vector<std::uint32_t> out;
            out.reserve(word.size());
            out.push_back(head);
            out.insert(out.end(), rest.begin(), rest.end());
            return out;
        }
        case K::Compose: {
            for (auto it = e->args.rbegin(); it != e->args.rend(); ++it)
                word = expr_image(env, *it, std::move(word));
            return word;
        }
        case K::Inverse:
            throw std::runtime_error("the word oracle handles inverse-free expressions only");
        case K::Ref:
            return expr_image(env, env.lookup(e->name), std::move(word));
    }
    throw std::runtime_error("unreachable");
}

/// Orbit lengths of j -> m + k j mod d^n for every residue, one walk per
/// orbit.  Callers keep k * d^n inside 64 bits.
inline std::vector<std::uint64_t> affine_orbit_lengths(std::uint64_t d, std::uint64_t m,
                                                       std::uint64_t k, int n) {
    std::uint64_t M = 1;
    for (int i = 0; i < n; ++i) M *= d;
    if (k != 0 && M > ~std::uint64_t{0} / k) throw std::runtime_error("modulus too large");
    std::vector<std::uint64_t> len(M, 0);
    std::vector<std::uint64_t> orbit;
    for (std::uint64_t v = 0; v < M; ++v) {
        if (len[v] != 0) continue;
        orbit.clear();
        std::uint64_t j = v;
        do {
            orbit.push_back(j);
            j = (m + k * j) % M;
        } while (j != v);
        for (std::uint64_t x : orbit) len[x] = orbit.size();
    }
    return len;
}

/// 1 + k + ... + k^(n-1) by Horner, then count factors of d.
inline unsigned long naive_geometric_valuation(std::uint32_t d, unsigned long k, unsigned long n) {
    mpz_class acc = 0;
    for (unsigned long i = 0; i < n; ++i) acc = acc * k + 1;
    unsigned long v = 0;
    while (acc != 0 && mpz_divisible_ui_p(acc.get_mpz_t(), d)) {
        mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), d);
        ++v;
    }
    return v;
}

}  // namespace oracle
