#include <cstdint>
#include <vector>

#include "arbor/affine.hpp"
#include "arbor/automorphism.hpp"
#include "arbor/cycles.hpp"
#include "arbor/engine.hpp"
#include "arbor/errors.hpp"
#include "arbor/random.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace arbor;

namespace {

BaseOdometerFrame binary_frame(int depth) {
    return BaseOdometerFrame(odometer_truncation(TreeShape::uniform(2, depth), depth));
}

}  // namespace

TEST_CASE("affine application and composition") {
    AffineElement id(2, 4, 0, 1);
    for (long j = 0; j < 16; ++j) CHECK(affine_apply(id, j, 4) == j);

    AffineElement shift(2, 4, 1, 1);  // the base element itself
    CHECK(affine_apply(shift, 7, 4) == 8);

    AffineElement s25(2, 4, 2, 5);
    CHECK(affine_apply(s25, 3, 4) == 1);  // 2 + 15 = 17 = 1 mod 16

    AffineElement t(2, 4, 3, 7);
    AffineElement comp = affine_compose(s25, t);
    for (long j = 0; j < 16; ++j)
        CHECK(affine_apply(comp, j, 4) == affine_apply(s25, affine_apply(t, j, 4), 4));

    CHECK_THROWS_AS(AffineElement(2, 4, 1, 2), domain_error);  // multiplier not a unit
    CHECK_THROWS_AS(affine_compose(s25, AffineElement(3, 4, 1, 4)), domain_error);
}

TEST_CASE("powers follow the geometric sum") {
    AffineElement s(2, 4, 1, 5);
    CHECK(affine_power(s, 1) == s);
    AffineElement squared = affine_power(s, 2);
    CHECK(squared.m == 6);
    CHECK(squared.k == 9);  // 25 mod 16

    AffineElement translation(2, 4, 3, 1);
    AffineElement fourth = affine_power(translation, 4);
    CHECK(fourth.m == 12);
    CHECK(fourth.k == 1);

    CHECK(affine_power(s, 0) == AffineElement(2, 4, 0, 1));

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CounterRng rng(seed, 0, 0);
        std::uint32_t d = seed % 2 == 0 ? 2 : 3;
        AffineElement base(d, 8, static_cast<long>(rng.below(1000)),
                           static_cast<long>(rng.below(1000) * d + 1));
        AffineElement acc(d, 8, 0, 1);
        for (unsigned long p = 0; p <= 64; ++p) {
            CHECK(affine_power(base, p) == acc);
            acc = affine_compose(acc, base);
        }
    }
}

TEST_CASE("valuation of the geometric sum tracks the valuation of the exponent") {
    CHECK(geometric_valuation(3, 4, 1).v_sum == 0);
    ValuationRow d3 = geometric_valuation(3, 4, 9);
    CHECK(d3.v_sum == 2);
    CHECK(d3.v_n == 2);
    CHECK(geometric_valuation(3, 4, 3).v_sum == 1);  // 1 + 4 + 16 = 21
    ValuationRow d2 = geometric_valuation(2, 5, 4);
    CHECK(d2.v_sum == 2);  // 156 = 4 * 39
    CHECK(d2.v_n == 2);

    for (std::uint32_t d : {2u, 3u, 5u}) {
        std::vector<unsigned long> ks =
            d == 2 ? std::vector<unsigned long>{5, 9, 13} : std::vector<unsigned long>{d + 1, 2 * d + 1};
        for (unsigned long k : ks) {
            for (unsigned long n = 1; n <= 200; n += 7) {
                ValuationRow row = geometric_valuation(d, k, n);
                CHECK(row.v_sum == row.v_n);
                CHECK(row.v_sum == oracle::naive_geometric_valuation(d, k, n));
            }
        }
    }

    // outside the congruence conditions the raw valuation is still returned
    ValuationRow raw = geometric_valuation(2, 3, 2);  // 1 + 3 = 4
    CHECK(raw.v_sum == 2);
    CHECK(raw.v_n == 1);
    CHECK_THROWS_AS(geometric_valuation(2, 4, 3), domain_error);
}

TEST_CASE("minimality predicate matches realized transitivity") {
    CHECK(is_minimal_affine(AffineElement(2, 6, 1, 5)));
    CHECK_FALSE(is_minimal_affine(AffineElement(2, 6, 1, 3)));
    CHECK(is_minimal_affine(AffineElement(3, 6, 1, 4)));
    CHECK_FALSE(is_minimal_affine(AffineElement(3, 6, 3, 4)));

    BaseOdometerFrame frame = binary_frame(8);
    for (long m = 1; m < 16; ++m) {
        for (long k = 1; k < 16; k += 2) {
            AffineElement aff(2, 8, m, k);
            TruncatedAutomorphism u = realize_affine(frame, aff, 8);
            CHECK(is_minimal_affine(aff) == is_minimal_up_to(u, 8));
        }
    }
}

TEST_CASE("parity signature of odd multipliers") {
    CHECK(theta_signature(5) == ThetaSignature{0, 1});
    CHECK(theta_signature(7) == ThetaSignature{1, 0});
    CHECK(theta_signature(1) == ThetaSignature{0, 0});
    CHECK(theta_signature(3) == ThetaSignature{1, 1});
    for (long k = 1; k < 200; k += 2) {
        ThetaSignature sig = theta_signature(k);
        CHECK((sig.theta1 == 0) == (k % 4 == 1));
        CHECK((sig.theta2 == 0) == (k % 8 == 1 || k % 8 == 7));
    }
    CHECK_THROWS_AS(theta_signature(4), domain_error);
}

TEST_CASE("forecast lengths match brute-force orbits") {
    // the base point sits in a cycle of length d^(n-j)
    AffineElement a(2, 6, 2, 5);
    PredictedCycle zero = predicted_cycle_length(a, 0, 6);
    CHECK_FALSE(zero.fixed_point);
    CHECK(zero.length == 32);

    auto check_sweep = [](std::uint32_t d, long m, long k, int n) {
        AffineElement aff(d, n, m, k);
        auto brute = oracle::affine_orbit_lengths(d, static_cast<std::uint64_t>(m),
                                                  static_cast<std::uint64_t>(k), n);
        for (std::uint64_t v = 0; v < brute.size(); ++v) {
            PredictedCycle p = predicted_cycle_length(aff, static_cast<long>(v), n);
            CHECK((p.fixed_point ? 1 : p.length) == brute[v]);
        }
    };
    check_sweep(2, 2, 5, 4);
    check_sweep(2, 4, 13, 6);
    check_sweep(2, 8, 9, 7);
    check_sweep(3, 3, 4, 5);
    check_sweep(3, 9, 7, 6);
    check_sweep(5, 5, 6, 4);
    check_sweep(5, 25, 11, 5);

    CHECK_THROWS_AS(predicted_cycle_length(AffineElement(2, 4, 2, 3), 1, 4), domain_error);
    CHECK_THROWS_AS(predicted_cycle_length(AffineElement(2, 4, 1, 5), 1, 4), domain_error);
    CHECK_THROWS_AS(predicted_cycle_length(AffineElement(2, 4, 4, 5), 1, 2), depth_error);
}

TEST_CASE("level profile agrees with the per-residue forecast") {
    for (std::uint32_t d : {2u, 3u, 5u}) {
        long k = d == 2 ? 5 : static_cast<long>(d) + 1;
        for (long m : {static_cast<long>(d), static_cast<long>(2 * d * d)}) {
            int top = d == 5 ? 5 : 6;
            AffineElement aff(d, top, m, k);
            for (int n = 1; n <= top; ++n) {
                std::vector<std::uint64_t> profile;
                try {
                    profile = predicted_cycle_profile(aff, n);
                } catch (const depth_error&) {
                    continue;  // level does not exceed the translation valuation
                }
                for (std::uint64_t v = 0; v < profile.size(); ++v) {
                    PredictedCycle p = predicted_cycle_length(aff, static_cast<long>(v), n);
                    CHECK(profile[v] == (p.fixed_point ? 1 : p.length));
                }
            }
        }
    }
}

TEST_CASE("fixed points stay below the multiplier bound") {
    AffineElement aff(2, 10, 2, 5);
    auto lengths = oracle::affine_orbit_lengths(2, 2, 5, 10);
    std::uint64_t fixed = 0;
    for (std::uint64_t v = 0; v < lengths.size(); ++v)
        if (lengths[v] == 1) ++fixed;
    CHECK(fixed <= 4);
    std::uint64_t forecast_fixed = 0;
    for (std::uint64_t v = 0; v < lengths.size(); ++v)
        if (predicted_cycle_length(aff, static_cast<long>(v), 10).fixed_point) ++forecast_fixed;
    CHECK(forecast_fixed == fixed);
}

TEST_CASE("orbit coordinates along the base element") {
    BaseOdometerFrame frame = binary_frame(10);
    const TreeShape& shape = frame.shape();
    CHECK(frame.phi(0, 3) == 0);
    CHECK(frame.phi(shape.index_of({1, 0}), 2) == 1);
    CHECK(frame.phi(shape.index_of({0, 1}), 2) == 2);
    CHECK(frame.phi(shape.index_of({1, 1}), 2) == 3);

    for (int n = 1; n <= 10; ++n) {
        std::uint64_t size = shape.level_size(n);
        CounterRng rng(12, static_cast<std::uint64_t>(n), 0);
        for (int trial = 0; trial < 100; ++trial) {
            VertexIndex v = rng.below(size);
            CHECK(frame.phi(frame.base().apply(v, n), n) == (frame.phi(v, n) + 1) % size);
            CHECK(frame.phi_inverse(frame.phi(v, n), n) == v);
        }
    }

    TruncatedAutomorphism h = profile_element(fixtures::double_hold(4), 4);
    CHECK_THROWS_AS(BaseOdometerFrame{h}, domain_error);
}

TEST_CASE("realized affine elements behave like their model") {
    BaseOdometerFrame frame = binary_frame(10);
    TruncatedAutomorphism a = frame.base();

    CHECK(realize_affine(frame, AffineElement(2, 10, 1, 1), 10) == a);
    CHECK(realize_affine(frame, AffineElement(2, 10, 3, 1), 10) == power(a, 3));

    TruncatedAutomorphism u = realize_affine(frame, AffineElement(2, 10, 1, 5), 10);
    CHECK(verify_consistency(u).ok);
    CHECK(is_minimal_up_to(u, 10));

    // w a w^-1 = a^k at every level, for a spread of (m, k)
    CounterRng rng(77, 0, 0);
    for (int trial = 0; trial < 20; ++trial) {
        long m = static_cast<long>(rng.below(200));
        long k = static_cast<long>(rng.below(100)) * 2 + 1;
        TruncatedAutomorphism w = realize_affine(frame, AffineElement(2, 8, m, k), 8);
        TruncatedAutomorphism left = conjugate(w, a.truncated(8));
        TruncatedAutomorphism right = power(a.truncated(8), k);
        CHECK(left == right);
    }
}

TEST_CASE("only multiplier one commutes with the base") {
    BaseOdometerFrame frame = binary_frame(6);
    TruncatedAutomorphism a = frame.base();
    AffineElement base(2, 6, 1, 1);
    for (long m = 0; m < 4; ++m) {
        for (long k = 1; k < 64; k += 2) {
            AffineElement aff(2, 6, m, k);
            bool affine_commutes = affine_compose(aff, base) == affine_compose(base, aff);
            TruncatedAutomorphism w = realize_affine(frame, aff, 6);
            bool realized_commutes = compose(w, a) == compose(a, w);
            CHECK(affine_commutes == realized_commutes);
            CHECK(affine_commutes == (aff.k == 1));
        }
    }
}

TEST_CASE("every level pair of residues is reachable from a representative") {
    for (std::uint32_t d : {2u, 3u}) {
        int n = d == 2 ? 6 : 4;
        std::uint64_t M = 1;
        for (int i = 0; i < n; ++i) M *= d;
        for (std::uint64_t m = 0; m < M; ++m) {
            for (std::uint64_t k = 1; k < M; ++k) {
                if (k % d == 0) continue;
                AffineElement aff(d, n, static_cast<long>(m == 0 ? M : m),
                                  static_cast<long>(k));
                CHECK(mpz_class(aff.m % M) == m);
                CHECK(mpz_class(aff.k % M) == k);
            }
        }
    }
}
