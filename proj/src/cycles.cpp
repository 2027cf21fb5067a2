#include "arbor/cycles.hpp"

#include "arbor/errors.hpp"

namespace arbor {

CycleReport cycle_decomposition(const TruncatedAutomorphism& u, int n) {
    const LevelMap& map = u.level(n);
    CycleReport report;
    report.level = n;
    report.cycle_of.assign(map.size(), 0);
    std::vector<bool> seen(map.size(), false);
    for (VertexIndex v = 0; v < map.size(); ++v) {
        if (seen[v]) continue;
        std::uint32_t id = static_cast<std::uint32_t>(report.cycles.size());
        VertexIndex len = 0;
        for (VertexIndex x = v; !seen[x]; x = map[x]) {
            seen[x] = true;
            report.cycle_of[x] = id;
            ++len;
        }
        report.cycles.push_back({v, len});
    }
    return report;
}

std::vector<VertexIndex> cycle_members(const TruncatedAutomorphism& u, const CycleReport& report,
                                       std::size_t cycle_id) {
    const LevelMap& map = u.level(report.level);
    const CycleReport::Cycle& c = report.cycles.at(cycle_id);
    std::vector<VertexIndex> members;
    members.reserve(c.length);
    VertexIndex x = c.representative;
    do {
        members.push_back(x);
        x = map[x];
    } while (x != c.representative);
    return members;
}

std::vector<std::vector<VertexIndex>> ordered_cycles(const LevelMap& map) {
    std::vector<std::vector<VertexIndex>> cycles;
    std::vector<bool> seen(map.size(), false);
    for (VertexIndex v = 0; v < map.size(); ++v) {
        if (seen[v]) continue;
        std::vector<VertexIndex> cycle;
        for (VertexIndex x = v; !seen[x]; x = map[x]) {
            seen[x] = true;
            cycle.push_back(x);
        }
        cycles.push_back(std::move(cycle));
    }
    return cycles;
}

LevelMap splice_lift(const std::vector<std::vector<VertexIndex>>& cycles, std::uint32_t d) {
    VertexIndex parents = 0;
    for (const auto& c : cycles) parents += c.size();
    LevelMap map(parents * d);
    for (const auto& c : cycles) {
        VertexIndex len = c.size();
        for (std::uint32_t s = 0; s < d; ++s) {
            for (VertexIndex j = 0; j + 1 < len; ++j) map[c[j] * d + s] = c[j + 1] * d + s;
            map[c[len - 1] * d + s] = s + 1 < d ? c[0] * d + s + 1 : c[0] * d;
        }
    }
    return map;
}

LevelMap copy_lift(const std::vector<std::vector<VertexIndex>>& cycles, std::uint32_t d) {
    VertexIndex parents = 0;
    for (const auto& c : cycles) parents += c.size();
    LevelMap map(parents * d);
    for (const auto& c : cycles) {
        VertexIndex len = c.size();
        for (std::uint32_t s = 0; s < d; ++s) {
            for (VertexIndex j = 0; j + 1 < len; ++j) map[c[j] * d + s] = c[j + 1] * d + s;
            map[c[len - 1] * d + s] = c[0] * d + s;
        }
    }
    return map;
}

namespace {

VertexIndex cycle_length_through(const LevelMap& map, VertexIndex v) {
    VertexIndex len = 1;
    for (VertexIndex x = map[v]; x != v; x = map[x]) ++len;
    return len;
}

}  // namespace

StabilityStatus stable_up_to(const TruncatedAutomorphism& u, int n, VertexIndex v, int budget) {
    if (n < 1 || budget > u.depth() || n > budget)
        throw depth_error("stability needs 1 <= level <= budget <= stored depth");
    if (v >= u.shape().level_size(n)) throw shape_error("vertex outside the level");
    VertexIndex expected = cycle_length_through(u.level(n), v);
    VertexIndex lift = v;
    for (int m = n + 1; m <= budget; ++m) {
        std::uint32_t d = u.shape().factor(m);
        lift *= d;
        expected *= d;
        // All lifts of the cycle form one cycle exactly when one lift's cycle
        // already has the full size.
        if (cycle_length_through(u.level(m), lift) != expected) return {false, m, budget};
    }
    return {true, 0, budget};
}

SettledStats settled_stats(const TruncatedAutomorphism& u, int max_level, int budget) {
    if (max_level < 1 || max_level > budget || budget > u.depth())
        throw depth_error("stats need 1 <= max level <= budget <= stored depth");
    SettledStats stats;
    stats.budget = budget;
    for (int n = 1; n <= max_level; ++n) {
        CycleReport report = cycle_decomposition(u, n);
        VertexIndex stable = 0;
        for (const CycleReport::Cycle& c : report.cycles) {
            if (stable_up_to(u, n, c.representative, budget).stable) stable += c.length;
        }
        VertexIndex size = u.shape().level_size(n);
        stats.rows.push_back({n, stable, size, Rational(stable, size)});
    }
    return stats;
}

bool is_minimal_up_to(const TruncatedAutomorphism& u, int depth) {
    if (depth < 1 || depth > u.depth()) throw depth_error("bad minimality depth");
    for (int n = 1; n <= depth; ++n) {
        if (cycle_length_through(u.level(n), 0) != u.shape().level_size(n)) return false;
    }
    return true;
}

TruncatedAutomorphism strongly_settle(const TruncatedAutomorphism& u, int n) {
    if (n < 0 || n > u.depth()) throw depth_error("agreement level outside stored depth");
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(u.depth()));
    for (int m = 1; m <= n; ++m) levels.push_back(u.level(m));
    std::vector<std::vector<VertexIndex>> cycles =
        n == 0 ? std::vector<std::vector<VertexIndex>>{{0}} : ordered_cycles(u.level(n));
    for (int m = n + 1; m <= u.depth(); ++m) {
        std::uint32_t d = u.shape().factor(m);
        levels.push_back(splice_lift(cycles, d));
        // Each spliced cycle is again a single cycle whose smallest vertex is
        // the old representative at letter 0; rebuild the order in place.
        std::vector<std::vector<VertexIndex>> next;
        next.reserve(cycles.size());
        for (const auto& c : cycles) {
            std::vector<VertexIndex> lifted;
            lifted.reserve(c.size() * d);
            for (std::uint32_t s = 0; s < d; ++s)
                for (VertexIndex parent : c) lifted.push_back(parent * d + s);
            next.push_back(std::move(lifted));
        }
        cycles = std::move(next);
    }
    return TruncatedAutomorphism(u.shape().truncated(u.depth()), std::move(levels));
}

std::pair<SettledStats, SettledStats> power_settled_consistency(const TruncatedAutomorphism& u,
                                                                long e, int max_level,
                                                                int budget) {
    return {settled_stats(u, max_level, budget), settled_stats(power(u, e), max_level, budget)};
}

TruncatedAutomorphism level_conjugator(const TruncatedAutomorphism& u,
                                       const TruncatedAutomorphism& w) {
    if (u.shape() != w.shape() || u.depth() != w.depth())
        throw shape_error("conjugator needs matching shapes and depths");
    if (!is_minimal_up_to(u, u.depth()) || !is_minimal_up_to(w, w.depth()))
        throw domain_error("conjugator needs both elements transitive on every level");
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(u.depth()));
    for (int n = 1; n <= u.depth(); ++n) {
        const LevelMap& un = u.level(n);
        const LevelMap& wn = w.level(n);
        LevelMap g(un.size());
        VertexIndex x = 0, y = 0;
        for (VertexIndex step = 0; step < un.size(); ++step) {
            g[x] = y;
            x = un[x];
            y = wn[y];
        }
        levels.push_back(std::move(g));
    }
    return TruncatedAutomorphism(u.shape().truncated(u.depth()), std::move(levels));
}

}  // namespace arbor
