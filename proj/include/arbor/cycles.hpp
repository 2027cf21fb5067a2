#pragma once

#include <cstdint>
#include <vector>

#include "arbor/automorphism.hpp"
#include "arbor/random.hpp"
#include "arbor/rational.hpp"
#include "arbor/shape.hpp"

namespace arbor {

/// Cycle decomposition of one level map.  Vertices carry the id of their
/// cycle; each cycle records its smallest vertex and its length.
struct CycleReport {
    int level = 0;
    struct Cycle {
        VertexIndex representative = 0;
        VertexIndex length = 0;
    };
    std::vector<Cycle> cycles;
    std::vector<std::uint32_t> cycle_of;
};

CycleReport cycle_decomposition(const TruncatedAutomorphism& u, int n);

/// Members of one cycle in traversal order, starting at the representative.
std::vector<VertexIndex> cycle_members(const TruncatedAutomorphism& u, const CycleReport& report,
                                       std::size_t cycle_id);

/// Ordered vertices of every cycle of a level permutation, each cycle
/// starting at its smallest vertex.
std::vector<std::vector<VertexIndex>> ordered_cycles(const LevelMap& map);

/// Lift of level-n cycles to a level-(n+1) permutation in which every cycle
/// becomes a single cycle d times longer: child letters ride along the parent
/// cycle and step to the next letter each time the cycle closes, the last
/// letter wrapping to the first vertex at letter 0.
LevelMap splice_lift(const std::vector<std::vector<VertexIndex>>& cycles, std::uint32_t d);

/// Lift preserving lengths: the parent cycle is copied onto each child letter.
LevelMap copy_lift(const std::vector<std::vector<VertexIndex>>& cycles, std::uint32_t d);

/// Whether the cycle through a level-n vertex keeps growing by the full
/// branching factor at every deeper stored level up to the budget.  A cycle of
/// length k at level n is stable through level m when all its lifts at m form
/// one cycle of length k * (product of the factors between).  broken_at is
/// the first level where that fails.
struct StabilityStatus {
    bool stable = false;
    int broken_at = 0;
    int budget = 0;
};

StabilityStatus stable_up_to(const TruncatedAutomorphism& u, int n, VertexIndex v, int budget);

/// Per-level counts of vertices lying in cycles stable through the budget.
struct SettledStats {
    int budget = 0;
    struct LevelRow {
        int level = 0;
        VertexIndex stable_vertices = 0;
        VertexIndex level_size = 0;
        Rational fraction;
    };
    std::vector<LevelRow> rows;
};

SettledStats settled_stats(const TruncatedAutomorphism& u, int max_level, int budget);

/// Transitive on every level 1..depth.
bool is_minimal_up_to(const TruncatedAutomorphism& u, int depth);

/// Element agreeing with u through level n whose every cycle at levels >= n
/// splices at all deeper stored levels, so each level-n vertex sits in a
/// stable cycle through the full depth.  Distance to u is at most 2^-n.
TruncatedAutomorphism strongly_settle(const TruncatedAutomorphism& u, int n);

/// Stability statistics of u and of u^e side by side, same budget.
std::pair<SettledStats, SettledStats> power_settled_consistency(const TruncatedAutomorphism& u,
                                                                long e, int max_level,
                                                                int budget);

/// Conjugator g with g u g^-1 = w for two elements transitive on every level,
/// built by aligning the two orbits of the leftmost branch level by level.
TruncatedAutomorphism level_conjugator(const TruncatedAutomorphism& u,
                                       const TruncatedAutomorphism& w);

}  // namespace arbor
