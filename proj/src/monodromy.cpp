#include "arbor/monodromy.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>

#include "arbor/automorphism.hpp"
#include "arbor/cycles.hpp"
#include "arbor/errors.hpp"

namespace arbor {

namespace {

std::string gen_name(int i) { return "u" + std::to_string(i); }
std::string word_name(int i) { return "w" + std::to_string(i); }

void require_indices(const ImgPresentation& pres) {
    if (pres.s < 1 || pres.s >= pres.r)
        throw domain_error("generator family needs 1 <= s < r");
}

}  // namespace

NormalizerCase normalizer_case(const ImgPresentation& pres) {
    require_indices(pres);
    if (pres.r == 2) return NormalizerCase::Dihedral;
    if (pres.r == 3 && pres.s == 2) return NormalizerCase::Corner;
    if (pres.s == 1) return NormalizerCase::FirstColumn;
    return NormalizerCase::Interior;
}

std::vector<ExprPtr> img_generators(RecursionEnv& env, const ImgPresentation& pres) {
    require_indices(pres);
    std::vector<ExprPtr> out;
    env.define(gen_name(1), ex_root_perm({1, 0}));
    out.push_back(ex_ref(gen_name(1)));
    for (int i = 2; i <= pres.r; ++i) {
        ExprPtr body;
        if (i == pres.s + 1)
            body = ex_tuple({ex_ref(gen_name(pres.s)), ex_ref(gen_name(pres.r))});
        else
            body = ex_tuple({ex_ref(gen_name(i - 1)), ex_identity()});
        env.define(gen_name(i), body);
        out.push_back(ex_ref(gen_name(i)));
    }
    return out;
}

ExprPtr product_generator(const ImgPresentation& pres) {
    require_indices(pres);
    std::vector<ExprPtr> parts;
    for (int i = 1; i <= pres.r; ++i) parts.push_back(ex_ref(gen_name(i)));
    return ex_compose(std::move(parts));
}

std::vector<ExprPtr> normalizer_words(RecursionEnv& env, const ImgPresentation& pres, int count) {
    NormalizerCase c = normalizer_case(pres);
    if (c == NormalizerCase::Dihedral)
        throw domain_error("the r = 2 family has no normalizer words");
    if (!env.has(gen_name(pres.r))) throw domain_error("define the generator family first");
    if (c == NormalizerCase::Corner && !env.has("w0"))
        env.define("w0", ex_compose({ex_ref(gen_name(3)),
                                     ex_tuple({ex_ref("w0"), ex_ref("w0")})}));
    std::vector<ExprPtr> out;
    for (int i = 1; i <= count; ++i) {
        if (!env.has(word_name(i))) {
            ExprPtr body;
            if (i > 1) {
                body = ex_tuple({ex_ref(word_name(i - 1)), ex_ref(word_name(i - 1))});
            } else if (c == NormalizerCase::Interior) {
                body = ex_tuple({ex_ref(gen_name(pres.s)), ex_ref(gen_name(pres.s))});
            } else {
                ExprPtr tail =
                    ex_power(ex_compose({ex_ref(gen_name(pres.s)), ex_ref(gen_name(pres.r))}), 2);
                body = ex_tuple({ex_identity(), tail});
            }
            env.define(word_name(i), body);
        }
        out.push_back(ex_ref(word_name(i)));
    }
    return out;
}

int normalizer_first_level(const ImgPresentation& pres, int i) {
    switch (normalizer_case(pres)) {
        case NormalizerCase::Interior:
            return i + pres.s;
        case NormalizerCase::FirstColumn:
            return i + 1;
        case NormalizerCase::Corner:
            return i == 0 ? 1 : i + 2;
        default:
            throw domain_error("the r = 2 family has no normalizer words");
    }
}

int normalizer_support(const ImgPresentation& pres, int depth) {
    int i = 0;
    while (normalizer_first_level(pres, i + 1) <= depth) ++i;
    return i;
}

ExprPtr coset_word(const ImgPresentation& pres, const std::vector<int>& t) {
    NormalizerCase c = normalizer_case(pres);
    std::vector<ExprPtr> parts;
    // sgn_n(w0) = sgn_n(u3), so an odd w0 exponent would make the word odd at
    // deep levels; the extra u3 restores sign +1 and stays inside the group.
    if (c == NormalizerCase::Corner && !t.empty() && t[0] % 2 == 1)
        parts.push_back(ex_ref(gen_name(pres.r)));
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0) continue;
        if (t[i] < 0) throw domain_error("coset exponents must be nonnegative");
        if (i == 0 && c != NormalizerCase::Corner)
            throw domain_error("the w0 slot exists only for r = 3, s = 2");
        ExprPtr f = ex_ref(word_name(static_cast<int>(i)));
        parts.push_back(t[i] == 1 ? f : ex_power(f, t[i]));
    }
    return ex_compose(std::move(parts));
}

ExprPtr coset_minimal_element(const ImgPresentation& pres, const std::vector<int>& t) {
    return ex_compose({product_generator(pres), coset_word(pres, t)});
}

PermGroup level_group(const std::vector<TruncatedAutomorphism>& gens, int n) {
    if (gens.empty()) throw domain_error("need at least one generator");
    PermGroup group(static_cast<std::uint32_t>(gens.front().shape().level_size(n)));
    for (const auto& g : gens) group.add_generator(perm_from_level(g.level(n)));
    return group;
}

bool weyl_kernel_condition(NormalizerCase c, const mpz_class& k) {
    unsigned long r8 = mpz_fdiv_ui(k.get_mpz_t(), 8);
    switch (c) {
        case NormalizerCase::Interior:
            return r8 % 4 == 1;
        case NormalizerCase::FirstColumn:
            return r8 == 1 || r8 == 7;
        case NormalizerCase::Corner:
            return r8 == 1;
        default:
            throw domain_error("no kernel rule for the r = 2 family");
    }
}

std::vector<WeylRow> weyl_index_experiment(const ImgPresentation& pres,
                                           const std::vector<std::uint64_t>& ms,
                                           const std::vector<std::uint64_t>& ks, int n_max) {
    NormalizerCase c = normalizer_case(pres);
    RecursionEnv env;
    img_generators(env, pres);
    Evaluator eval(env, TreeShape::uniform(2, n_max));
    std::vector<TruncatedAutomorphism> gens;
    for (int i = 1; i <= pres.r; ++i) gens.push_back(eval.truncate(ex_ref(gen_name(i)), n_max));
    BaseOdometerFrame frame(eval.truncate(product_generator(pres), n_max));
    std::vector<PermGroup> groups;
    groups.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) groups.push_back(level_group(gens, n));

    std::vector<WeylRow> rows;
    for (std::uint64_t m : ms) {
        for (std::uint64_t k : ks) {
            AffineElement a(2, n_max, mpz_class(static_cast<unsigned long>(m)),
                            mpz_class(static_cast<unsigned long>(k)));
            TruncatedAutomorphism g = realize_affine(frame, a, n_max);
            WeylRow row;
            row.r = pres.r;
            row.s = pres.s;
            row.m = m;
            row.k = k;
            row.theta = theta_signature(a.k);
            row.kernel = weyl_kernel_condition(c, a.k);
            row.member_all_levels = true;
            for (int n = 1; n <= n_max; ++n) {
                if (!groups[static_cast<std::size_t>(n - 1)].contains(
                        perm_from_level(g.level(n)))) {
                    row.member_all_levels = false;
                    row.first_non_member_level = n;
                    break;
                }
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<DihedralLevelAudit> dihedral_audit(int n_max) {
    ImgPresentation pres{2, 1};
    RecursionEnv env;
    img_generators(env, pres);
    TreeShape shape = TreeShape::uniform(2, n_max);
    Evaluator eval(env, shape);
    std::vector<TruncatedAutomorphism> gens = {eval.truncate(ex_ref(gen_name(1)), n_max),
                                               eval.truncate(ex_ref(gen_name(2)), n_max)};
    TruncatedAutomorphism a0 = eval.truncate(product_generator(pres), n_max);

    std::vector<DihedralLevelAudit> out;
    for (int n = 1; n <= n_max; ++n) {
        DihedralLevelAudit row;
        row.level = n;
        PermGroup group = level_group(gens, n);
        row.order = group.order();
        // Sign classes collapse at level 1, so the image there has order 2.
        row.order_expected = row.order == (n == 1 ? mpz_class(2) : mpz_class(1) << (n + 1));

        std::uint64_t cycle = shape.level_size(n);
        Perm a = perm_from_level(a0.level(n));
        std::vector<Perm> powers;
        powers.reserve(cycle);
        Perm p = perm_identity(static_cast<std::uint32_t>(cycle));
        for (std::uint64_t e = 0; e < cycle; ++e) {
            powers.push_back(p);
            p = perm_compose(a, p);
        }
        std::map<Perm, std::uint64_t> exponent_of;
        for (std::uint64_t e = 0; e < cycle; ++e) exponent_of.emplace(powers[e], e);

        row.outside = 0;
        row.outside_involutions = true;
        std::set<std::uint64_t> multipliers;
        bool all_affine = true;
        for (const Perm& g : group.elements(4 * cycle)) {
            Perm conj = perm_compose(g, perm_compose(a, perm_inverse(g)));
            auto it = exponent_of.find(conj);
            if (it == exponent_of.end())
                all_affine = false;
            else
                multipliers.insert(it->second);
            if (exponent_of.count(g) == 0) {
                ++row.outside;
                if (!perm_is_identity(perm_compose(g, g))) row.outside_involutions = false;
            }
        }
        std::set<std::uint64_t> expected = {1 % cycle, (cycle - 1) % cycle};
        row.multipliers_ok = all_affine && multipliers == expected;
        out.push_back(row);
    }
    return out;
}

CosetCheck conjugation_coset_check(const TruncatedAutomorphism& z,
                                   const TruncatedAutomorphism& aw, const PermGroup& group,
                                   int n) {
    TruncatedAutomorphism moved = conjugate(z, aw);
    CosetCheck out;
    out.minimal = is_minimal_up_to(moved, moved.depth());
    out.same_coset = group.contains(perm_from_level(compose(inverse(aw), moved).level(n)));
    return out;
}

}  // namespace arbor
