#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "arbor/affine.hpp"
#include "arbor/engine.hpp"
#include "arbor/expr.hpp"
#include "arbor/permgroup.hpp"

namespace arbor {

/// Binary-tree generator family indexed by 1 <= s < r: u1 swaps the top
/// letters, u_i = (u_{i-1}, 1) for the other indices except
/// u_{s+1} = (u_s, u_r), which closes the loop.
struct ImgPresentation {
    int r = 2;
    int s = 1;
};

/// Region of the (r, s) index grid; each region has its own recursion for
/// the normalizer words.
enum class NormalizerCase { Dihedral, Interior, FirstColumn, Corner };

NormalizerCase normalizer_case(const ImgPresentation& pres);

/// Defines u1..ur in the environment and returns references in order.
std::vector<ExprPtr> img_generators(RecursionEnv& env, const ImgPresentation& pres);

/// The product u1 u2 ... ur; transitive on every level.
ExprPtr product_generator(const ImgPresentation& pres);

/// Defines the normalizer words w1..w_count (plus the self-similar w0 in the
/// Corner region) and returns w1..w_count in order.  The words commute with
/// the closure up to elements of it; each w_i is trivial above a depth that
/// grows with i, so only finitely many matter at a fixed depth.
std::vector<ExprPtr> normalizer_words(RecursionEnv& env, const ImgPresentation& pres, int count);

/// Largest index whose word can act nontrivially at the given depth.
int normalizer_support(const ImgPresentation& pres, int depth);

/// Level where w_i is first allowed to act nontrivially.
int normalizer_first_level(const ImgPresentation& pres, int i);

/// Product w0^t0 w1^t1 ... for a finite 0/1 exponent vector (t[0] is the w0
/// slot, used only in the Corner region).  In the Corner region an odd t0
/// premultiplies by u3, keeping every level sign +1 without leaving the coset.
ExprPtr coset_word(const ImgPresentation& pres, const std::vector<int>& t);

/// The element a0 * coset_word(t): transitive on every level, with square in
/// the closure, and outside the closure whenever t is nonzero.
ExprPtr coset_minimal_element(const ImgPresentation& pres, const std::vector<int>& t);

/// Finite group generated by level-n restrictions.
PermGroup level_group(const std::vector<TruncatedAutomorphism>& gens, int n);

/// Multipliers k for which the scaled elements stay inside the closure.
bool weyl_kernel_condition(NormalizerCase c, const mpz_class& k);

struct WeylRow {
    int r = 0;
    int s = 0;
    std::uint64_t m = 0;
    std::uint64_t k = 0;
    ThetaSignature theta;
    bool kernel = false;
    bool member_all_levels = false;
    int first_non_member_level = 0;  // 0 when member at every tested level
};

/// Realizes j -> m + k j over the frame of a0 and tests membership in the
/// closure level by level.  Groups are built once per level and shared.
std::vector<WeylRow> weyl_index_experiment(const ImgPresentation& pres,
                                           const std::vector<std::uint64_t>& ms,
                                           const std::vector<std::uint64_t>& ks, int n_max);

struct DihedralLevelAudit {
    int level = 0;
    mpz_class order;
    bool order_expected = false;       // 2^(n+1)
    std::uint64_t outside = 0;         // elements outside the cyclic subgroup
    bool outside_involutions = false;  // all outside elements square to 1
    bool multipliers_ok = false;       // conjugation multipliers are exactly +-1
};

/// Exhaustive check of the r=2, s=1 family through the given depth.
std::vector<DihedralLevelAudit> dihedral_audit(int n_max);

struct CosetCheck {
    bool minimal = false;
    bool same_coset = false;
};

/// Whether z (aw) z^-1 is still transitive on every stored level and lands in
/// the same coset of the level group at level n.
CosetCheck conjugation_coset_check(const TruncatedAutomorphism& z,
                                   const TruncatedAutomorphism& aw, const PermGroup& group,
                                   int n);

}  // namespace arbor
