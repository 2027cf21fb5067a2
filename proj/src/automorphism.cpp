#include "arbor/automorphism.hpp"

#include <numeric>
#include <sstream>

namespace arbor {

namespace {

void require_permutation(const LevelMap& map, VertexIndex size) {
    if (map.size() != size) throw shape_error("level map size does not match level");
    std::vector<bool> seen(size, false);
    for (VertexIndex image : map) {
        if (image >= size || seen[image]) throw shape_error("level map is not a permutation");
        seen[image] = true;
    }
}

}  // namespace

TruncatedAutomorphism::TruncatedAutomorphism(TreeShape shape, std::vector<LevelMap> levels)
    : shape_(std::move(shape)), levels_(std::move(levels)) {
    if (static_cast<int>(levels_.size()) > shape_.depth())
        throw depth_error("more level maps than the shape depth");
    for (int n = 1; n <= depth(); ++n)
        require_permutation(levels_[static_cast<std::size_t>(n) - 1], shape_.level_size(n));
}

const LevelMap& TruncatedAutomorphism::level(int n) const {
    if (n < 1 || n > depth()) throw depth_error("level outside stored depth");
    return levels_[static_cast<std::size_t>(n) - 1];
}

TruncatedAutomorphism TruncatedAutomorphism::truncated(int depth) const {
    if (depth < 0 || depth > this->depth()) throw depth_error("bad truncation depth");
    return TruncatedAutomorphism(
        shape_.truncated(depth),
        std::vector<LevelMap>(levels_.begin(), levels_.begin() + depth));
}

TruncatedAutomorphism identity_automorphism(const TreeShape& shape) {
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(shape.depth()));
    for (int n = 1; n <= shape.depth(); ++n) {
        LevelMap map(shape.level_size(n));
        std::iota(map.begin(), map.end(), VertexIndex{0});
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(shape, std::move(levels));
}

TruncatedAutomorphism glue(const TreeShape& shape, const std::vector<std::uint32_t>& rho,
                           const std::vector<TruncatedAutomorphism>& children) {
    std::uint32_t d = shape.factor(1);
    if (rho.size() != d || children.size() != d)
        throw shape_error("glue needs one child per level-1 letter");
    require_permutation(LevelMap(rho.begin(), rho.end()), d);
    TreeShape sub = shape.shifted();
    for (const TruncatedAutomorphism& c : children) {
        if (c.shape() != sub.truncated(c.depth()))
            throw shape_error("child shape does not match the subtree");
        if (c.depth() < shape.depth() - 1) throw depth_error("child truncated too shallow");
    }
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(shape.depth()));
    levels.emplace_back(rho.begin(), rho.end());
    for (int n = 2; n <= shape.depth(); ++n) {
        VertexIndex suffix = shape.level_size(n) / d;
        LevelMap map(shape.level_size(n));
        for (std::uint32_t i = 0; i < d; ++i) {
            const LevelMap& sub_map = children[i].level(n - 1);
            VertexIndex base = VertexIndex{i} * suffix;
            VertexIndex target = VertexIndex{rho[i]} * suffix;
            for (VertexIndex x = 0; x < suffix; ++x) map[base + x] = target + sub_map[x];
        }
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(shape, std::move(levels));
}

TruncatedAutomorphism compose(const TruncatedAutomorphism& u, const TruncatedAutomorphism& w) {
    if (u.shape() != w.shape() || u.depth() != w.depth())
        throw shape_error("compose needs matching shapes and depths");
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(u.depth()));
    for (int n = 1; n <= u.depth(); ++n) {
        const LevelMap& un = u.level(n);
        const LevelMap& wn = w.level(n);
        LevelMap map(un.size());
        for (VertexIndex x = 0; x < map.size(); ++x) map[x] = un[wn[x]];
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(u.shape(), std::move(levels));
}

TruncatedAutomorphism inverse(const TruncatedAutomorphism& u) {
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(u.depth()));
    for (int n = 1; n <= u.depth(); ++n) {
        const LevelMap& un = u.level(n);
        LevelMap map(un.size());
        for (VertexIndex x = 0; x < map.size(); ++x) map[un[x]] = x;
        levels.push_back(std::move(map));
    }
    return TruncatedAutomorphism(u.shape(), std::move(levels));
}

TruncatedAutomorphism conjugate(const TruncatedAutomorphism& g, const TruncatedAutomorphism& u) {
    return compose(compose(g, u), inverse(g));
}

TruncatedAutomorphism power(const TruncatedAutomorphism& u, long e) {
    TruncatedAutomorphism base = e < 0 ? inverse(u) : u;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1ul
                            : static_cast<unsigned long>(e);
    TruncatedAutomorphism acc = identity_automorphism(u.shape().truncated(u.depth()));
    while (k != 0) {
        if (k & 1ul) acc = compose(acc, base);
        k >>= 1;
        if (k != 0) base = compose(base, base);
    }
    return acc;
}

ConsistencyReport verify_consistency(const TruncatedAutomorphism& u) {
    const TreeShape& shape = u.shape();
    for (int n = 2; n <= u.depth(); ++n) {
        const LevelMap& fine = u.level(n);
        const LevelMap& coarse = u.level(n - 1);
        std::uint32_t m = shape.factor(n);
        for (VertexIndex v = 0; v < fine.size(); ++v) {
            if (fine[v] / m != coarse[v / m]) return {false, n, v};
        }
    }
    return {};
}

std::string Distance::to_string() const {
    if (equal_to_depth) return "equal-to-depth-" + std::to_string(agreement);
    if (agreement == 0) return "1";
    return "1/2^" + std::to_string(agreement);
}

Distance distance(const TruncatedAutomorphism& u, const TruncatedAutomorphism& w) {
    if (u.shape() != w.shape() || u.depth() != w.depth())
        throw shape_error("distance needs matching shapes and depths");
    for (int n = 1; n <= u.depth(); ++n) {
        if (u.level(n) != w.level(n)) return {n - 1, false};
    }
    return {u.depth(), true};
}

int sign_at_level(const TruncatedAutomorphism& u, int n) {
    const LevelMap& map = u.level(n);
    std::vector<bool> seen(map.size(), false);
    VertexIndex cycles = 0;
    for (VertexIndex v = 0; v < map.size(); ++v) {
        if (seen[v]) continue;
        ++cycles;
        for (VertexIndex x = v; !seen[x]; x = map[x]) seen[x] = true;
    }
    return ((map.size() - cycles) % 2 == 0) ? 1 : -1;
}

mpz_class order_at_level(const TruncatedAutomorphism& u, int n) {
    const LevelMap& map = u.level(n);
    std::vector<bool> seen(map.size(), false);
    mpz_class order = 1;
    for (VertexIndex v = 0; v < map.size(); ++v) {
        if (seen[v]) continue;
        unsigned long len = 0;
        for (VertexIndex x = v; !seen[x]; x = map[x]) {
            seen[x] = true;
            ++len;
        }
        mpz_lcm_ui(order.get_mpz_t(), order.get_mpz_t(), len);
    }
    return order;
}

std::vector<mpz_class> order_profile(const TruncatedAutomorphism& u) {
    std::vector<mpz_class> orders;
    orders.reserve(static_cast<std::size_t>(u.depth()));
    for (int n = 1; n <= u.depth(); ++n) orders.push_back(order_at_level(u, n));
    return orders;
}

}  // namespace arbor
