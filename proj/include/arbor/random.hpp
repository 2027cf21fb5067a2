#pragma once

#include <cstdint>
#include <vector>

#include "arbor/automorphism.hpp"
#include "arbor/shape.hpp"

namespace arbor {

/// Deterministic word stream keyed by (seed, level, vertex).  Draws depend
/// only on the key, never on traversal order, so sampled elements are
/// reproducible across runs and machines.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t level, std::uint64_t vertex);

    std::uint64_t next();

    /// Exactly uniform draw from [0, bound), by rejection.
    std::uint64_t below(std::uint64_t bound);

  private:
    std::uint64_t state_;
};

/// Uniform random automorphism: an independent uniform local permutation at
/// every internal vertex.
TruncatedAutomorphism haar_sample(const TreeShape& shape, int depth, std::uint64_t seed);

/// Closure of a permutation list under composition, in deterministic
/// discovery order starting from the identity.
std::vector<std::vector<std::uint32_t>> permutation_closure(
    std::uint32_t degree, const std::vector<std::vector<std::uint32_t>>& generators);

/// Like haar_sample but local actions are drawn uniformly from the closure of
/// the given generators.  Needs constant branching matching the degree.
TruncatedAutomorphism wreath_sample(const TreeShape& shape, int depth,
                                    const std::vector<std::vector<std::uint32_t>>& generators,
                                    std::uint64_t seed);

}  // namespace arbor
