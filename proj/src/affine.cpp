#include "arbor/affine.hpp"

#include "arbor/cycles.hpp"
#include "arbor/errors.hpp"

namespace arbor {

namespace {

mpz_class pow_ui(std::uint32_t base, unsigned long exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
    return out;
}

mpz_class mod_nonneg(const mpz_class& x, const mpz_class& modulus) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

}  // namespace

AffineElement::AffineElement(std::uint32_t d_, int depth_, mpz_class m_, mpz_class k_)
    : d(d_), depth(depth_), m(std::move(m_)), k(std::move(k_)) {
    if (d < 2) throw domain_error("affine base needs d >= 2");
    if (depth < 1) throw depth_error("affine depth must be positive");
    mpz_class M = modulus(depth);
    m = mod_nonneg(m, M);
    k = mod_nonneg(k, M);
    if (mpz_divisible_ui_p(k.get_mpz_t(), d))
        throw domain_error("multiplier must be a unit mod d^N");
}

mpz_class AffineElement::modulus(int n) const {
    if (n < 0 || n > depth) throw depth_error("level outside the affine depth");
    return pow_ui(d, static_cast<unsigned long>(n));
}

mpz_class affine_apply(const AffineElement& a, const mpz_class& j, int n) {
    if (n < 1 || n > a.depth) throw depth_error("level outside the affine depth");
    return mod_nonneg(a.m + a.k * j, a.modulus(n));
}

AffineElement affine_compose(const AffineElement& a, const AffineElement& b) {
    if (a.d != b.d || a.depth != b.depth)
        throw domain_error("affine composition needs matching d and depth");
    return AffineElement(a.d, a.depth, a.m + a.k * b.m, a.k * b.k);
}

AffineElement affine_power(const AffineElement& a, unsigned long p) {
    AffineElement acc(a.d, a.depth, 0, 1);
    AffineElement base = a;
    while (p != 0) {
        if (p & 1ul) acc = affine_compose(acc, base);
        p >>= 1;
        if (p != 0) base = affine_compose(base, base);
    }
    return acc;
}

ValuationRow geometric_valuation(std::uint32_t d, const mpz_class& k, unsigned long n) {
    if (d < 2) throw domain_error("valuation needs d >= 2");
    if (n == 0) throw domain_error("valuation needs n >= 1");
    if (mpz_divisible_ui_p(k.get_mpz_t(), d)) throw domain_error("multiplier must be a unit");
    mpz_class sum;
    if (k == 1) {
        sum = static_cast<unsigned long>(n);
    } else {
        mpz_class kn;
        mpz_pow_ui(kn.get_mpz_t(), k.get_mpz_t(), n);
        mpz_class num = kn - 1;
        mpz_class den = k - 1;
        mpz_divexact(sum.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    mpz_class dd = d, scratch;
    ValuationRow row;
    row.n = n;
    mpz_class nz = static_cast<unsigned long>(n);
    row.v_n = mpz_remove(scratch.get_mpz_t(), nz.get_mpz_t(), dd.get_mpz_t());
    mpz_abs(sum.get_mpz_t(), sum.get_mpz_t());
    row.v_sum = mpz_remove(scratch.get_mpz_t(), sum.get_mpz_t(), dd.get_mpz_t());
    return row;
}

bool is_minimal_affine(const AffineElement& a) {
    if (a.d == 2) {
        bool m_odd = mpz_odd_p(a.m.get_mpz_t()) != 0;
        mpz_class k4 = a.depth >= 2 ? mod_nonneg(a.k, mpz_class(4)) : mpz_class(1);
        return m_odd && k4 == 1;
    }
    bool m_unit = !mpz_divisible_ui_p(a.m.get_mpz_t(), a.d);
    return m_unit && mod_nonneg(a.k - 1, mpz_class(a.d)) == 0;
}

ThetaSignature theta_signature(const mpz_class& k) {
    if (mpz_even_p(k.get_mpz_t())) throw domain_error("signature needs an odd multiplier");
    mpz_class half = (k - 1) / 2;
    mpz_class eighth = (k * k - 1) / 8;
    ThetaSignature sig;
    sig.theta1 = mpz_odd_p(half.get_mpz_t()) ? 1 : 0;
    sig.theta2 = mpz_odd_p(eighth.get_mpz_t()) ? 1 : 0;
    return sig;
}

PredictedCycle predicted_cycle_length(const AffineElement& a, const mpz_class& v, int n) {
    if (n < 1 || n > a.depth) throw depth_error("level outside the affine depth");
    std::uint32_t d = a.d;
    if (d == 2) {
        if (mod_nonneg(a.k, mpz_class(4)) != 1)
            throw domain_error("prediction needs k = 1 mod 4 when d = 2");
    } else if (mod_nonneg(a.k - 1, mpz_class(d)) != 0) {
        throw domain_error("prediction needs k = 1 mod d");
    }
    if (a.m == 0 || !mpz_divisible_ui_p(a.m.get_mpz_t(), d))
        throw domain_error("prediction needs m nonzero and divisible by d");
    mpz_class dd = d;
    mpz_class q;
    unsigned long j = mpz_remove(q.get_mpz_t(), a.m.get_mpz_t(), dd.get_mpz_t());
    if (static_cast<unsigned long>(n) <= j)
        throw depth_error("level must exceed the valuation of the translation");
    auto level_power = [&](unsigned long e) {
        mpz_class p = pow_ui(d, e);
        return static_cast<std::uint64_t>(mpz_get_ui(p.get_mpz_t()));
    };
    mpz_class s = (a.k - 1) / d;
    mpz_class sv = s * mod_nonneg(v, a.modulus(n));
    unsigned long nn = static_cast<unsigned long>(n);
    if (sv == 0) return {false, level_power(nn - j)};
    mpz_class r;
    unsigned long i = mpz_remove(r.get_mpz_t(), sv.get_mpz_t(), dd.get_mpz_t());
    if (i + 1 < j) return {false, level_power(nn - (i + 1))};
    if (i + 1 > j) return {false, level_power(nn - j)};
    mpz_class qr = q + r;
    unsigned long t;
    if (qr == 0) {
        t = nn;  // valuation beyond every level in range
    } else {
        mpz_class rest;
        mpz_abs(qr.get_mpz_t(), qr.get_mpz_t());
        t = mpz_remove(rest.get_mpz_t(), qr.get_mpz_t(), dd.get_mpz_t());
    }
    if (t < nn - j) return {false, level_power(nn - j - t)};
    return {true, 1};
}

std::vector<std::uint64_t> predicted_cycle_profile(const AffineElement& a, int n) {
    // The v = 0 call performs every precondition check of the slow path.
    PredictedCycle at_zero = predicted_cycle_length(a, 0, n);

    std::uint64_t M = 1;
    bool fits = true;
    for (int i = 0; i < n; ++i) {
        if (M > (std::uint64_t{1} << 62) / a.d) {
            fits = false;
            break;
        }
        M *= a.d;
    }
    if (fits)
        fits = mpz_fits_ulong_p(a.m.get_mpz_t()) != 0 && mpz_fits_ulong_p(a.k.get_mpz_t()) != 0;
    if (!fits) {
        std::size_t size = mpz_get_ui(a.modulus(n).get_mpz_t());
        std::vector<std::uint64_t> out(size);
        for (std::size_t v = 0; v < size; ++v) {
            PredictedCycle p = predicted_cycle_length(a, mpz_class(static_cast<unsigned long>(v)), n);
            out[v] = p.fixed_point ? 1 : p.length;
        }
        return out;
    }

    std::uint64_t d = a.d;
    std::uint64_t m = mpz_get_ui(a.m.get_mpz_t());
    std::uint64_t k = mpz_get_ui(a.k.get_mpz_t());
    unsigned long j = 0;
    std::uint64_t q = m;
    while (q % d == 0) {
        q /= d;
        ++j;
    }
    std::vector<std::uint64_t> powers(static_cast<std::size_t>(n) + 1, 1);
    for (int i = 1; i <= n; ++i) powers[static_cast<std::size_t>(i)] = powers[static_cast<std::size_t>(i) - 1] * d;
    std::uint64_t len_j = powers[static_cast<std::size_t>(n) - j];

    std::vector<std::uint64_t> out(M, len_j);
    std::uint64_t s = (k - 1) / d;
    if (s == 0) return out;  // k = 1: every nonzero s*v branch is unreachable

    unsigned long vs = 0;
    std::uint64_t s_red = s;
    while (s_red % d == 0) {
        s_red /= d;
        ++vs;
    }
    unsigned long L = static_cast<unsigned long>(n) - j;
    for (std::uint64_t v = 1; v < M; ++v) {
        unsigned long iv = 0;
        std::uint64_t vv = v;
        while (vv % d == 0) {
            vv /= d;
            ++iv;
        }
        unsigned long i = vs + iv;  // valuation of s*v
        if (i + 1 < j) {
            out[v] = powers[static_cast<std::size_t>(n) - (i + 1)];
        } else if (i + 1 == j) {
            unsigned __int128 qr = q + static_cast<unsigned __int128>(s_red) * vv;
            unsigned long t = 0;
            while (t < L && qr % d == 0) {
                qr /= d;
                ++t;
            }
            out[v] = t < L ? powers[static_cast<std::size_t>(L - t)] : 1;
        }
    }
    out[0] = at_zero.length;
    return out;
}

BaseOdometerFrame::BaseOdometerFrame(TruncatedAutomorphism base) : base_(std::move(base)) {
    if (!is_minimal_up_to(base_, base_.depth()))
        throw domain_error("frame base must be transitive on every level");
    position_.resize(static_cast<std::size_t>(base_.depth()));
    vertex_at_.resize(static_cast<std::size_t>(base_.depth()));
    for (int n = 1; n <= base_.depth(); ++n) {
        const LevelMap& map = base_.level(n);
        std::vector<VertexIndex>& pos = position_[static_cast<std::size_t>(n) - 1];
        std::vector<VertexIndex>& at = vertex_at_[static_cast<std::size_t>(n) - 1];
        pos.resize(map.size());
        at.resize(map.size());
        VertexIndex v = 0;
        for (VertexIndex jj = 0; jj < map.size(); ++jj) {
            pos[v] = jj;
            at[jj] = v;
            v = map[v];
        }
    }
}

VertexIndex BaseOdometerFrame::phi(VertexIndex v, int n) const {
    if (n < 1 || n > depth()) throw depth_error("level outside the frame depth");
    return position_[static_cast<std::size_t>(n) - 1].at(v);
}

VertexIndex BaseOdometerFrame::phi_inverse(VertexIndex j, int n) const {
    if (n < 1 || n > depth()) throw depth_error("level outside the frame depth");
    return vertex_at_[static_cast<std::size_t>(n) - 1].at(j);
}

LevelMap realize_affine_level(const BaseOdometerFrame& frame, const AffineElement& a, int n) {
    if (n < 1 || n > frame.depth() || n > a.depth)
        throw depth_error("level outside the frame or affine depth");
    for (int i = 1; i <= n; ++i)
        if (frame.shape().factor(i) != a.d)
            throw shape_error("frame shape does not match the affine base");
    std::uint64_t M = frame.shape().level_size(n);
    std::uint64_t m = mpz_get_ui(mod_nonneg(a.m, a.modulus(n)).get_mpz_t());
    std::uint64_t k = mpz_get_ui(mod_nonneg(a.k, a.modulus(n)).get_mpz_t());
    const LevelMap& base_map = frame.base().level(n);
    LevelMap map(base_map.size());
    for (VertexIndex v = 0; v < map.size(); ++v) {
        std::uint64_t j = frame.phi(v, n);
        std::uint64_t image = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(k) * j + m) % M);
        map[v] = frame.phi_inverse(image, n);
    }
    return map;
}

TruncatedAutomorphism realize_affine(const BaseOdometerFrame& frame, const AffineElement& a,
                                     int depth) {
    if (depth < 1 || depth > frame.depth() || depth > a.depth)
        throw depth_error("depth outside the frame or affine depth");
    std::vector<LevelMap> levels;
    levels.reserve(static_cast<std::size_t>(depth));
    for (int n = 1; n <= depth; ++n) levels.push_back(realize_affine_level(frame, a, n));
    return TruncatedAutomorphism(frame.shape().truncated(depth), std::move(levels));
}

}  // namespace arbor
