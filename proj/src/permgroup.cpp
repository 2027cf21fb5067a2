#include "arbor/permgroup.hpp"

#include <algorithm>
#include <utility>

#include "arbor/errors.hpp"

namespace arbor {

Perm perm_identity(std::uint32_t degree) {
    Perm g(degree);
    for (std::uint32_t i = 0; i < degree; ++i) g[i] = static_cast<std::uint16_t>(i);
    return g;
}

Perm perm_from_level(const LevelMap& map) {
    if (map.size() > 65535) throw domain_error("permutation degree exceeds 65535");
    Perm g(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) g[i] = static_cast<std::uint16_t>(map[i]);
    return g;
}

bool perm_is_identity(const Perm& g) {
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] != i) return false;
    return true;
}

Perm perm_compose(const Perm& f, const Perm& g) {
    if (f.size() != g.size()) throw domain_error("composing permutations of unequal degree");
    Perm out(f.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = f[g[i]];
    return out;
}

Perm perm_inverse(const Perm& g) {
    Perm out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[g[i]] = static_cast<std::uint16_t>(i);
    return out;
}

PermGroup::PermGroup(std::uint32_t degree) : degree_(degree) {
    if (degree < 2 || (degree & (degree - 1)) != 0)
        throw domain_error("degree must be a power of two (binary sibling blocks)");
    levels_ = 0;
    for (std::uint32_t size = degree; size > 1; size >>= 1) ++levels_;
    table_.resize(static_cast<std::size_t>(levels_) + 1);
}

PermGroup::Elt PermGroup::identity_elt() const {
    Elt e;
    e.first = levels_ + 1;
    e.maps.resize(static_cast<std::size_t>(levels_));
    for (int l = 1; l <= levels_; ++l) {
        auto& m = e.maps[static_cast<std::size_t>(l) - 1];
        m.resize(std::size_t{1} << l);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint16_t>(i);
    }
    return e;
}

PermGroup::Elt PermGroup::to_elt(const Perm& g) const {
    if (g.size() != degree_) throw domain_error("generator degree does not match the group");
    std::vector<bool> seen(degree_, false);
    for (std::uint16_t image : g) {
        if (image >= degree_ || seen[image]) throw domain_error("not a permutation");
        seen[image] = true;
    }
    Elt e = identity_elt();
    e.maps.back().assign(g.begin(), g.end());
    for (int l = levels_ - 1; l >= 1; --l) {
        const auto& child = e.maps[static_cast<std::size_t>(l)];
        auto& parent = e.maps[static_cast<std::size_t>(l) - 1];
        for (std::size_t v = 0; v < parent.size(); ++v) {
            std::uint16_t a = static_cast<std::uint16_t>(child[2 * v] >> 1);
            std::uint16_t b = static_cast<std::uint16_t>(child[2 * v + 1] >> 1);
            if (a != b)
                throw domain_error("permutation does not preserve the sibling blocks");
            parent[v] = a;
        }
    }
    e.first = 1;
    refresh_first(e, 1);
    return e;
}

PermGroup::Elt PermGroup::compose_elt(const Elt& a, const Elt& b) const {
    Elt out = identity_elt();
    int from = std::min(a.first, b.first);
    for (int l = from; l <= levels_; ++l) {
        const auto& fa = a.maps[static_cast<std::size_t>(l) - 1];
        const auto& fb = b.maps[static_cast<std::size_t>(l) - 1];
        auto& fo = out.maps[static_cast<std::size_t>(l) - 1];
        for (std::size_t i = 0; i < fo.size(); ++i) fo[i] = fa[fb[i]];
    }
    out.first = from;
    refresh_first(out, from);
    return out;
}

PermGroup::Elt PermGroup::inverse_elt(const Elt& a) const {
    Elt out = identity_elt();
    for (int l = a.first; l <= levels_; ++l) {
        const auto& f = a.maps[static_cast<std::size_t>(l) - 1];
        auto& fo = out.maps[static_cast<std::size_t>(l) - 1];
        for (std::size_t i = 0; i < f.size(); ++i) fo[f[i]] = static_cast<std::uint16_t>(i);
    }
    out.first = a.first;
    return out;
}

void PermGroup::refresh_first(Elt& a, int from) const {
    for (int l = std::max(from, a.first); l <= levels_; ++l) {
        const auto& f = a.maps[static_cast<std::size_t>(l) - 1];
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] != i) {
                a.first = l;
                return;
            }
    }
    a.first = levels_ + 1;
}

std::vector<std::uint64_t> PermGroup::swap_bits(const Elt& a, int level) const {
    std::size_t parents = std::size_t{1} << (level - 1);
    std::vector<std::uint64_t> bits((parents + 63) / 64, 0);
    const auto& f = a.maps[static_cast<std::size_t>(level) - 1];
    for (std::size_t v = 0; v < parents; ++v)
        if (f[2 * v] != 2 * v) bits[v / 64] |= std::uint64_t{1} << (v % 64);
    return bits;
}

PermGroup::SiftResult PermGroup::sift(Elt g) const {
    SiftResult r;
    while (g.first <= levels_) {
        int m = g.first;
        std::vector<std::uint64_t> bits = swap_bits(g, m);
        const auto& row = table_[static_cast<std::size_t>(m)];
        for (;;) {
            std::uint32_t lead = 0;
            bool any = false;
            for (std::size_t w = 0; w < bits.size(); ++w)
                if (bits[w]) {
                    lead = static_cast<std::uint32_t>(
                        64 * w + static_cast<std::uint32_t>(__builtin_ctzll(bits[w])));
                    any = true;
                    break;
                }
            if (!any) break;
            auto it = row.find(lead);
            if (it == row.end()) {
                r.identity = false;
                r.residue = std::move(g);
                r.level = m;
                r.bits = std::move(bits);
                r.lead = lead;
                return r;
            }
            const Pivot& p = pivots_[it->second];
            for (std::size_t w = 0; w < bits.size(); ++w) bits[w] ^= p.bits[w];
            g = compose_elt(p.inv, g);
        }
        // all swaps at this level cleared, so the level map is now identity
        g.first = m + 1;
        refresh_first(g, m + 1);
    }
    return r;
}

void PermGroup::process(std::vector<Elt>& queue) {
    while (!queue.empty()) {
        Elt e = std::move(queue.back());
        queue.pop_back();
        SiftResult r = sift(std::move(e));
        if (r.identity) continue;

        Pivot p;
        p.elt = std::move(r.residue);
        p.inv = inverse_elt(p.elt);
        p.level = r.level;
        p.bits = std::move(r.bits);
        p.lead = r.lead;
        std::size_t idx = pivots_.size();
        pivots_.push_back(std::move(p));
        table_[static_cast<std::size_t>(r.level)][r.lead] = idx;

        const Pivot& self = pivots_[idx];
        queue.push_back(compose_elt(self.elt, self.elt));
        // one conjugation per pair, the later strong generator moved by the
        // earlier one in filtration order
        for (std::size_t j = 0; j < idx; ++j) {
            const Pivot& q = pivots_[j];
            bool q_earlier = std::make_pair(q.level, q.lead) < std::make_pair(self.level,
                                                                              self.lead);
            const Pivot& outer = q_earlier ? q : self;
            const Pivot& inner = q_earlier ? self : q;
            queue.push_back(compose_elt(outer.elt, compose_elt(inner.elt, outer.inv)));
        }
    }
}

void PermGroup::add_generator(const Perm& g) {
    std::vector<Elt> queue;
    queue.push_back(to_elt(g));
    process(queue);
}

bool PermGroup::contains(const Perm& g) const { return sift(to_elt(g)).identity; }

mpz_class PermGroup::order() const {
    mpz_class n = 1;
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), pivots_.size());
    return n;
}

std::vector<Perm> PermGroup::elements(std::uint64_t cap) const {
    if (pivots_.size() >= 64 || (std::uint64_t{1} << pivots_.size()) > cap)
        throw domain_error("group too large to enumerate");

    // normal-form order: exponents vary along the filtration-sorted sequence
    std::vector<std::size_t> sorted(pivots_.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = i;
    std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return std::make_pair(pivots_[a].level, pivots_[a].lead) <
               std::make_pair(pivots_[b].level, pivots_[b].lead);
    });

    std::vector<Perm> out = {perm_identity(degree_)};
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        const auto& leaf = pivots_[*it].elt.maps.back();
        Perm p(leaf.begin(), leaf.end());
        std::size_t size = out.size();
        for (std::size_t i = 0; i < size; ++i) out.push_back(perm_compose(p, out[i]));
    }
    return out;
}

}  // namespace arbor
