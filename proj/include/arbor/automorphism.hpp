#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/shape.hpp"

namespace arbor {

/// Permutation of one level, stored densely: map[v] is the image of v.
using LevelMap = std::vector<VertexIndex>;

/// An automorphism of the depth-N truncation of a rooted tree, stored as one
/// permutation per level.  Compatibility between consecutive levels is a
/// class invariant for everything this library constructs; families built
/// by hand can be audited with verify_consistency.
class TruncatedAutomorphism {
  public:
    TruncatedAutomorphism() = default;

    /// Takes ownership of one map per level 1..N; each must be a permutation.
    TruncatedAutomorphism(TreeShape shape, std::vector<LevelMap> levels);

    const TreeShape& shape() const { return shape_; }
    int depth() const { return static_cast<int>(levels_.size()); }

    const LevelMap& level(int n) const;

    /// Image of a level-n vertex.
    VertexIndex apply(VertexIndex v, int n) const { return level(n)[v]; }

    /// Copy restricted to a shallower depth.
    TruncatedAutomorphism truncated(int depth) const;

    bool operator==(const TruncatedAutomorphism& o) const {
        return shape_ == o.shape_ && levels_ == o.levels_;
    }
    bool operator!=(const TruncatedAutomorphism& o) const { return !(*this == o); }

  private:
    TreeShape shape_;
    std::vector<LevelMap> levels_;
};

TruncatedAutomorphism identity_automorphism(const TreeShape& shape);

/// Root permutation rho of the level-1 alphabet glued over one child
/// automorphism per letter: the result maps i.x to rho(i).child_i(x).
/// Children live on the shifted shape with depth one less.
TruncatedAutomorphism glue(const TreeShape& shape, const std::vector<std::uint32_t>& rho,
                           const std::vector<TruncatedAutomorphism>& children);

TruncatedAutomorphism compose(const TruncatedAutomorphism& u, const TruncatedAutomorphism& w);
TruncatedAutomorphism inverse(const TruncatedAutomorphism& u);
TruncatedAutomorphism conjugate(const TruncatedAutomorphism& g, const TruncatedAutomorphism& u);
TruncatedAutomorphism power(const TruncatedAutomorphism& u, long e);

struct ConsistencyReport {
    bool ok = true;
    int level = 0;        // first offending level when !ok
    VertexIndex vertex = 0;
};

/// Checks that every level map sends children of v to children of the image
/// of v; reports the first violation.
ConsistencyReport verify_consistency(const TruncatedAutomorphism& u);

/// Ultrametric distance between two families over the same shape and depth.
/// The value is 2^-agreement where agreement is the deepest level on which
/// the families coincide; families equal through the full depth are flagged
/// instead of being assigned 0.
struct Distance {
    int agreement = 0;
    bool equal_to_depth = false;

    bool at_most(int exponent) const { return equal_to_depth || agreement >= exponent; }
    std::string to_string() const;
};

Distance distance(const TruncatedAutomorphism& u, const TruncatedAutomorphism& w);

/// Parity of the level-n permutation: +1 even, -1 odd.
int sign_at_level(const TruncatedAutomorphism& u, int n);

/// Order of the level-n permutation (lcm of its cycle lengths).
mpz_class order_at_level(const TruncatedAutomorphism& u, int n);

/// Orders at every stored level, shallow to deep.
std::vector<mpz_class> order_profile(const TruncatedAutomorphism& u);

}  // namespace arbor
