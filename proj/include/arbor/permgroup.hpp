#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "arbor/automorphism.hpp"

namespace arbor {

using Perm = std::vector<std::uint16_t>;

Perm perm_identity(std::uint32_t degree);
Perm perm_from_level(const LevelMap& map);
bool perm_is_identity(const Perm& g);
Perm perm_compose(const Perm& f, const Perm& g);  // apply g first
Perm perm_inverse(const Perm& g);

/// Membership, order, and enumeration for permutation groups on 2^n points
/// that preserve the nested sibling blocks of a binary tree (every such group
/// is a 2-group).  Strong generators are kept echelonized along the level
/// filtration: each one first acts at some level, where its pattern of child
/// swaps owns a leading bit no other strong generator has.  Sifting clears an
/// element's swap pattern level by level; whatever survives is a new strong
/// generator, and closure under pairwise conjugation and squares keeps
/// membership and order exact.
class PermGroup {
  public:
    /// Degree must be a power of two; the block tree is implied.
    explicit PermGroup(std::uint32_t degree);

    std::uint32_t degree() const { return degree_; }

    /// Generators must permute each level's sibling blocks consistently.
    void add_generator(const Perm& g);

    bool contains(const Perm& g) const;

    mpz_class order() const;

    /// Number of strong generators (the order is 2 to this power).
    std::size_t chain_length() const { return pivots_.size(); }

    /// Every element, as leaf permutations, in normal-form order.
    /// Throws domain_error when the order exceeds the cap.
    std::vector<Perm> elements(std::uint64_t cap) const;

  private:
    /// Level maps 1..n of one tree automorphism; maps below `first` are
    /// identity and never inspected.
    struct Elt {
        int first = 1;
        std::vector<std::vector<std::uint16_t>> maps;
    };

    struct Pivot {
        Elt elt;
        Elt inv;
        int level = 1;
        std::vector<std::uint64_t> bits;  // swap pattern at `level`
        std::uint32_t lead = 0;           // lowest set bit, unique per level
    };

    Elt identity_elt() const;
    Elt to_elt(const Perm& g) const;
    Elt compose_elt(const Elt& a, const Elt& b) const;  // apply b first
    Elt inverse_elt(const Elt& a) const;
    void refresh_first(Elt& a, int from) const;

    /// Swap pattern of an element that is trivial above the given level.
    std::vector<std::uint64_t> swap_bits(const Elt& a, int level) const;

    struct SiftResult {
        bool identity = true;
        Elt residue;
        int level = 1;
        std::vector<std::uint64_t> bits;
        std::uint32_t lead = 0;
    };
    SiftResult sift(Elt g) const;

    void process(std::vector<Elt>& queue);

    std::uint32_t degree_ = 2;
    int levels_ = 1;
    std::vector<Pivot> pivots_;
    std::vector<std::map<std::uint32_t, std::size_t>> table_;  // level -> lead -> pivot
};

}  // namespace arbor
