#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "arbor/automorphism.hpp"
#include "arbor/shape.hpp"

namespace arbor {

/// Element of the affine model j -> m + k*j on Z/d^N, the coordinate picture
/// of the group generated by a transitive base element together with its
/// normalizer.  Residues are kept reduced mod d^N; k must be a unit.
struct AffineElement {
    std::uint32_t d = 2;
    int depth = 1;
    mpz_class m;
    mpz_class k;

    AffineElement() = default;
    AffineElement(std::uint32_t d_, int depth_, mpz_class m_, mpz_class k_);

    mpz_class modulus(int n) const;  // d^n

    bool operator==(const AffineElement& o) const {
        return d == o.d && depth == o.depth && m == o.m && k == o.k;
    }
};

/// Image of a residue at level n <= depth.
mpz_class affine_apply(const AffineElement& a, const mpz_class& j, int n);

/// Function composition: (a after b)(j) = a(b(j)).
AffineElement affine_compose(const AffineElement& a, const AffineElement& b);

/// p-th power via the geometric sum: (m, k)^p = (m(1+k+...+k^(p-1)), k^p).
AffineElement affine_power(const AffineElement& a, unsigned long p);

/// Exact d-adic valuation of 1 + k + ... + k^(n-1), by big-integer
/// arithmetic.  Returns the valuation and the valuation of n for comparison.
struct ValuationRow {
    unsigned long n = 0;
    unsigned long v_n = 0;
    unsigned long v_sum = 0;
};
ValuationRow geometric_valuation(std::uint32_t d, const mpz_class& k, unsigned long n);

/// Transitivity on every level: for d = 2 exactly when m is odd and
/// k = 1 mod 4; for odd d exactly when d does not divide m and k = 1 mod d.
bool is_minimal_affine(const AffineElement& a);

/// Parity invariants of an odd multiplier: first component 0 exactly when
/// k = 1 mod 4, second 0 exactly when k = +-1 mod 8.
struct ThetaSignature {
    int theta1 = 0;
    int theta2 = 0;
    bool operator==(const ThetaSignature& o) const {
        return theta1 == o.theta1 && theta2 == o.theta2;
    }
};
ThetaSignature theta_signature(const mpz_class& k);

/// Forecast of the cycle through residue v at level n for multiplier
/// k = 1 mod d (d odd) or 1 mod 4 (d = 2) and d | m.  Writing j = v_d(m),
/// s = (k-1)/d and i = v_d(s*v), the length is d^(n-i-1) when i < j-1 and
/// d^(n-j) when i > j-1 (including v = 0); at i = j-1 it drops to
/// d^(n-j-t) with t = v_d(m/d^j + s*v/d^(j-1)) unless t reaches n-j, in
/// which case v is a fixed point.
struct PredictedCycle {
    bool fixed_point = false;
    std::uint64_t length = 1;
};
PredictedCycle predicted_cycle_length(const AffineElement& a, const mpz_class& v, int n);

/// Forecast for every residue of one level at once, fixed points recorded as
/// length 1.  Runs in plain 64-bit arithmetic when the modulus and the
/// reduced (m, k) permit, which makes exhaustive sweeps feasible at levels
/// where the per-residue call would dominate.
std::vector<std::uint64_t> predicted_cycle_profile(const AffineElement& a, int n);

/// Coordinates along a transitive base element: position of each vertex in
/// the orbit of the all-zeros branch, one table per level.
class BaseOdometerFrame {
  public:
    explicit BaseOdometerFrame(TruncatedAutomorphism base);

    const TruncatedAutomorphism& base() const { return base_; }
    const TreeShape& shape() const { return base_.shape(); }
    int depth() const { return base_.depth(); }

    /// Orbit position of vertex v at level n: base^phi(v) sends the
    /// all-zeros vertex to v.
    VertexIndex phi(VertexIndex v, int n) const;
    VertexIndex phi_inverse(VertexIndex j, int n) const;

  private:
    TruncatedAutomorphism base_;
    std::vector<std::vector<VertexIndex>> position_;  // vertex -> orbit index
    std::vector<std::vector<VertexIndex>> vertex_at_;  // orbit index -> vertex
};

/// Level map of the affine element in frame coordinates.
LevelMap realize_affine_level(const BaseOdometerFrame& frame, const AffineElement& a, int n);

/// Whole truncation of the affine element through the given depth.
TruncatedAutomorphism realize_affine(const BaseOdometerFrame& frame, const AffineElement& a,
                                     int depth);

}  // namespace arbor
