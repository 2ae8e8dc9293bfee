#include <doctest.h>

#include <random>
#include <set>

#include "siegel/kitaoka.hpp"

using namespace siegel;

namespace {
TruncationPolicy small_policy() {
    TruncationPolicy pol;
    pol.rank1_c_max = 12;
    pol.rank1_s_max = 12;
    pol.rank2_norm_max = 3;
    return pol;
}
} // namespace

TEST_SUITE("kitaoka") {

TEST_CASE("weight context") {
    CHECK_THROWS_AS(WeightContext::make(5), std::invalid_argument);
    CHECK_THROWS_AS(WeightContext::make(4), std::invalid_argument);

    WeightContext w = WeightContext::make(6);
    CHECK(w.l.two_l == 9);
    // 8 c_6 = 2 sqrt(pi) (4 pi)^{-9} Gamma(4.5) Gamma(4)
    mpfr_prec_t p = w.c_k.prec();
    Real expected = Real(2L, p) * sqrt(Real::pi(p));
    expected *= pow_si(Real::pi(p) * 4L, -9);
    expected *= gamma(Real(4.5, p));
    expected *= gamma(Real(4L, p));
    Real eight_ck = w.c_k * 8L;
    CHECK(abs(eight_ck - expected) < abs(expected) * Real("1e-35", p));
    CHECK(w.c_k.sign() > 0);

    // automatic precision raise at large k
    WeightContext big = WeightContext::make(40);
    CHECK(big.precision.bits > 128);
}

TEST_CASE("rank0 spec examples") {
    CHECK(rank0_term(HalfIntegralForm::scalar(1), HalfIntegralForm::scalar(1)) == 8);
    CHECK(rank0_term(HalfIntegralForm::scalar(2), HalfIntegralForm::scalar(3)) == 0);
    CHECK(rank0_term(HalfIntegralForm::diag(1, 2), HalfIntegralForm{1, 2, 3}) == 4);
}

TEST_CASE("primitive classes of I2 are the primitively represented integers") {
    auto classes = primitive_classes(HalfIntegralForm::scalar(1), 50);
    std::set<i64> got;
    for (const auto& [s, v] : classes) {
        got.insert(s);
        for (const auto& f : v) CHECK(f.c == s); // bottom-right entry is s
    }
    std::set<i64> want;
    for (i64 u = -20; u <= 20; ++u)
        for (i64 v = -20; v <= 20; ++v) {
            if (u == 0 && v == 0) continue;
            if (gcd_ll(u, v) != 1) continue;
            i64 s = u * u + v * v;
            if (s <= 50) want.insert(s);
        }
    CHECK(got == want);
}

TEST_CASE("rank1 s-support divisibility for distinct primes") {
    TruncationPolicy pol = small_policy();
    pol.rank1_s_max = 60;
    // both sides must represent s, so lcm(p, q) | s
    auto support_25 = rank1_s_support(HalfIntegralForm::scalar(2), HalfIntegralForm::scalar(5), pol);
    CHECK(!support_25.empty());
    for (i64 s : support_25) CHECK(s % 10 == 0);
    // for (2, 3) the support is empty below 60: 3m is never primitively
    // represented by x^2 + y^2
    auto support_23 = rank1_s_support(HalfIntegralForm::scalar(2), HalfIntegralForm::scalar(3), pol);
    for (i64 s : support_23) CHECK(s % 6 == 0);
    CHECK(support_23.empty());
}

TEST_CASE("empty representation set gives zero rank-1 term") {
    // Q = 7 I2 represents nothing below 7
    TruncationPolicy pol = small_policy();
    pol.rank1_s_max = 5;
    WeightContext w = WeightContext::make(10);
    RankTerm r = rank1_term(HalfIntegralForm::scalar(7), HalfIntegralForm::scalar(1), w, pol);
    CHECK(r.value.re.is_zero());
    CHECK(r.value.im.is_zero());
}

TEST_CASE("completion-shift invariance of the H summand") {
    // shifting the top row of the completion by multiples of the bottom row
    // changes (p1, p2) but not the H value
    mpfr_prec_t p = 128;
    HalfIntegralForm f{2, 1, 3};
    i64 x = 2, y = 1; // primitive
    i64 w1 = 1, w2 = 1; // w1 y - w2 x = -1... use (1, 0): 1*1 - 0*2 = 1
    w1 = 1; w2 = 0;
    auto form_for = [&](i64 a1, i64 a2) {
        i64 pa = f.value_at(a1, a2);
        i64 pb = 2 * f.a * a1 * x + f.b * (a1 * y + a2 * x) + 2 * f.c * a2 * y;
        i64 pc = f.value_at(x, y);
        return HalfIntegralForm{pa, pb, pc};
    };
    HalfIntegralForm base = form_for(w1, w2);
    HalfIntegralForm s{1, 1, base.c}; // any S with s4 matching
    for (i64 t : {-2, -1, 1, 3}) {
        HalfIntegralForm shifted = form_for(w1 + t * x, w2 + t * y);
        CHECK(shifted.b != base.b); // the shift genuinely moves p2
        for (i64 c : {1, 2, 3, 5}) {
            for (int sign : {+1, -1}) {
                ExpSumValue a = h_sum(base, s, c, sign, p);
                ExpSumValue b = h_sum(shifted, s, c, sign, p);
                CHECK(abs(a.value.re - b.value.re) < Real("1e-30", p));
                CHECK(abs(a.value.im - b.value.im) < Real("1e-30", p));
            }
        }
    }
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
    WeightContext w = WeightContext::make(10);
    TruncationPolicy pol = small_policy();
    HalfIntegralForm q = HalfIntegralForm::scalar(1);
    HalfIntegralForm t = HalfIntegralForm::scalar(2);

    RankTerm r1p = rank1_term(q, t, w, pol, 2);
    RankTerm r1s = rank1_term_serial(q, t, w, pol);
    CHECK(r1p.value.re == r1s.value.re);
    CHECK(r1p.value.im == r1s.value.im);
    CHECK(r1p.tail == r1s.tail);

    RankTerm r2p = rank2_term(q, t, w, pol, 2);
    RankTerm r2s = rank2_term_serial(q, t, w, pol);
    CHECK(r2p.value.re == r2s.value.re);
    CHECK(r2p.value.im == r2s.value.im);
    CHECK(r2p.quad_error == r2s.quad_error);
}

TEST_CASE("C and -C contribute equally") {
    mpfr_prec_t p = 128;
    HalfIntegralForm q{1, 0, 1}, t{2, 1, 3};
    for (Mat2 c : {Mat2{1, 0, 0, 2}, Mat2{2, 1, 1, 1}, Mat2{1, 2, 0, 1}, Mat2{2, 0, 1, 3}}) {
        ExpSumValue kp = symplectic_kloosterman(q, t, c, p);
        ExpSumValue km = symplectic_kloosterman(q, t, c.neg(), p);
        CHECK(kp.terms == km.terms);
        CHECK(abs(kp.value.re - km.value.re) < Real("1e-30", p));
        CHECK(abs(kp.value.im - km.value.im) < Real("1e-30", p));
    }
}

TEST_CASE("fourier coefficient at k = 10, Q = T = I2") {
    WeightContext w = WeightContext::make(10);
    TruncationPolicy pol = small_policy();
    CoefficientBreakdown cb = fourier_coefficient(HalfIntegralForm::scalar(1),
                                                  HalfIntegralForm::scalar(1), w, pol, 2);
    // rank-0 component is exactly 8
    CHECK(cb.rank0 == Real(8L, cb.rank0.prec()));
    CHECK(cb.tail_bound.is_finite());
    CHECK(cb.tail_bound.sign() > 0);
    // total = rank0 + rank1 + rank2 by construction
    Complex sum = cb.rank1 + cb.rank2;
    sum.re += cb.rank0;
    CHECK(sum.re == cb.total.re);
    CHECK(sum.im == cb.total.im);

    // refinement consistency at small radii
    CoefficientBreakdown fine = fourier_coefficient(HalfIntegralForm::scalar(1),
                                                    HalfIntegralForm::scalar(1), w, pol.doubled(), 2);
    Real delta = (cb.total - fine.total).abs();
    CHECK(delta <= cb.tail_bound + Real("1e-8", 128));
}

TEST_CASE("imaginary part stays below the certified tail") {
    WeightContext w = WeightContext::make(10);
    TruncationPolicy pol = small_policy();
    for (auto [q, t] : {std::pair{1L, 2L}, std::pair{1L, 1L}, std::pair{2L, 2L}}) {
        CoefficientBreakdown cb = fourier_coefficient(HalfIntegralForm::scalar(q),
                                                      HalfIntegralForm::scalar(t), w, pol, 2);
        CHECK(abs(cb.total.im) <= cb.tail_bound + Real("1e-10", 128));
    }
    // the diag(q^2, 1) family
    for (auto [q, t] : {std::pair{HalfIntegralForm::scalar(1), HalfIntegralForm::diag(4, 1)},
                        std::pair{HalfIntegralForm::scalar(2), HalfIntegralForm::diag(9, 1)}}) {
        CoefficientBreakdown cb = fourier_coefficient(q, t, w, pol, 2);
        CHECK(abs(cb.total.im) <= cb.tail_bound + Real("1e-10", 128));
    }
}

TEST_CASE("doubling tail mode reports the refinement delta") {
    WeightContext w = WeightContext::make(10);
    TruncationPolicy pol = small_policy();
    pol.tail_mode = TailMode::doubling;
    CoefficientBreakdown cb = fourier_coefficient(HalfIntegralForm::scalar(1),
                                                  HalfIntegralForm::scalar(1), w, pol, 2);
    CHECK(cb.tail_bound.is_finite());
    // the empirical tail is far smaller than the envelope at these weights
    TruncationPolicy env = small_policy();
    CoefficientBreakdown cbe = fourier_coefficient(HalfIntegralForm::scalar(1),
                                                   HalfIntegralForm::scalar(1), w, env, 2);
    CHECK(cb.tail_bound < cbe.tail_bound);
}

TEST_CASE("the three ranks cancel at a weight with no cusp forms") {
    // S_8(Sp4(Z)) = 0, so every coefficient of P_Q vanishes identically and
    // the rank-1/2 sums must cancel the automorphism term 8 exactly; the
    // computed total is truncation-sized
    WeightContext w = WeightContext::make(8);
    TruncationPolicy pol;
    pol.rank2_norm_max = 6;
    CoefficientBreakdown cb = fourier_coefficient(HalfIntegralForm::scalar(1),
                                                  HalfIntegralForm::scalar(1), w, pol, 2);
    CHECK(cb.rank0 == Real(8L, cb.rank0.prec()));
    CHECK(cb.total.abs() < Real(0.02, 128));
    CHECK(cb.total.abs() <= cb.tail_bound);
}

TEST_CASE("auto-raised precision at k > 30 flows end to end") {
    WeightContext w = WeightContext::make(32);
    REQUIRE(w.precision.bits > 128);
    TruncationPolicy pol;
    pol.rank1_c_max = pol.rank1_s_max = 6;
    pol.rank2_norm_max = 2;
    CoefficientBreakdown cb = fourier_coefficient(HalfIntegralForm::scalar(1),
                                                  HalfIntegralForm::scalar(1), w, pol, 2);
    CHECK(cb.rank0 == Real(8L, cb.rank0.prec()));
    CHECK(cb.total.re.prec() >= w.precision.bits);
    CHECK(cb.tail_bound.is_finite());
    // corrections at this weight are far below the rank-0 part
    Complex corr = cb.rank1 + cb.rank2;
    CHECK(corr.abs() < Real(1e-6, 128));
}

TEST_CASE("requested tail target failure is loud") {
    WeightContext w = WeightContext::make(10);
    TruncationPolicy pol = small_policy();
    pol.requested_tail = 1e-30;
    CHECK_THROWS_AS(fourier_coefficient(HalfIntegralForm::scalar(1), HalfIntegralForm::scalar(1), w, pol, 2),
                    TruncationTargetError);
}

} // TEST_SUITE
