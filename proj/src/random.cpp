#include "arbor/random.hpp"

#include <map>

#include "arbor/errors.hpp"

namespace arbor {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t level, std::uint64_t vertex) {
    state_ = mix(seed + 0x9e3779b97f4a7c15ull);
    state_ = mix(state_ ^ (level + 0xd1b54a32d192ed03ull));
    state_ = mix(state_ ^ (vertex + 0x2545f4914f6cdd1dull));
}

std::uint64_t CounterRng::next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
    if (bound == 0) throw domain_error("empty draw range");
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    for (;;) {
        std::uint64_t w = next();
        if (w <= limit) return w % bound;
    }
}

namespace {

std::vector<std::uint32_t> local_permutation(CounterRng& rng, std::uint32_t m) {
    std::vector<std::uint32_t> p(m);
    for (std::uint32_t i = 0; i < m; ++i) p[i] = i;
    for (std::uint32_t i = m; i > 1; --i) {
        std::uint64_t j = rng.below(i);
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

}  // namespace

TruncatedAutomorphism haar_sample(const TreeShape& shape, int depth, std::uint64_t seed) {
    if (depth < 1 || depth > shape.depth()) throw depth_error("bad sample depth");
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(depth));
    for (int n = 1; n <= depth; ++n) {
        std::uint32_t m = shape.factor(n);
        LevelMap map(shape.level_size(n));
        for (VertexIndex parent = 0; parent < shape.level_size(n - 1); ++parent) {
            CounterRng rng(seed, static_cast<std::uint64_t>(n - 1), parent);
            std::vector<std::uint32_t> rho = local_permutation(rng, m);
            VertexIndex image_parent = n == 1 ? 0 : levels[static_cast<std::size_t>(n) - 2][parent];
            for (std::uint32_t x = 0; x < m; ++x)
                map[parent * m + x] = image_parent * m + rho[x];
        }
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(shape.truncated(depth), std::move(levels));
}

std::vector<std::vector<std::uint32_t>> permutation_closure(
    std::uint32_t degree, const std::vector<std::vector<std::uint32_t>>& generators) {
    for (const auto& g : generators)
        if (g.size() != degree) throw shape_error("generator degree mismatch");
    std::vector<std::uint32_t> id(degree);
    for (std::uint32_t i = 0; i < degree; ++i) id[i] = i;
    std::vector<std::vector<std::uint32_t>> elems{id};
    std::map<std::vector<std::uint32_t>, bool> seen{{id, true}};
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& g : generators) {
            std::vector<std::uint32_t> f(degree);
            for (std::uint32_t x = 0; x < degree; ++x) f[x] = elems[head][g[x]];
            if (!seen.count(f)) {
                seen[f] = true;
                elems.push_back(std::move(f));
                if (elems.size() > (1u << 20)) throw domain_error("local subgroup too large");
            }
        }
    }
    return elems;
}

TruncatedAutomorphism wreath_sample(const TreeShape& shape, int depth,
                                    const std::vector<std::vector<std::uint32_t>>& generators,
                                    std::uint64_t seed) {
    if (depth < 1 || depth > shape.depth()) throw depth_error("bad sample depth");
    if (!shape.constant_arity()) throw shape_error("local subgroup needs constant branching");
    std::uint32_t m = shape.factor(1);
    std::vector<std::vector<std::uint32_t>> elems = permutation_closure(m, generators);
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(depth));
    for (int n = 1; n <= depth; ++n) {
        LevelMap map(shape.level_size(n));
        for (VertexIndex parent = 0; parent < shape.level_size(n - 1); ++parent) {
            CounterRng rng(seed, static_cast<std::uint64_t>(n - 1), parent);
            const std::vector<std::uint32_t>& rho = elems[rng.below(elems.size())];
            VertexIndex image_parent = n == 1 ? 0 : levels[static_cast<std::size_t>(n) - 2][parent];
            for (std::uint32_t x = 0; x < m; ++x)
                map[parent * m + x] = image_parent * m + rho[x];
        }
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(shape.truncated(depth), std::move(levels));
}

}  // namespace arbor
