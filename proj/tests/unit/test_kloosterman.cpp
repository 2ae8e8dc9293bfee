#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "siegel/kloosterman.hpp"

using namespace siegel;

TEST_SUITE("kloosterman") {

TEST_CASE("X(I2) is a single trivial class") {
    auto reps = enumerate_coset_reps(Mat2::identity());
    REQUIRE(reps.size() == 1);
    // equivalent to (A, D) = (0, 0): A mod {X C} = A mod symmetric, so the
    // class of A must be the zero class; same for D
    const Mat2& a = reps[0].A;
    const Mat2& d = reps[0].D;
    CHECK(a.b == a.c); // both are symmetric (mod the full symmetric lattice -> 0 class)
    CHECK(d.b == d.c);

    for (i64 n : {1, 2, 3}) {
        for (i64 m : {1, 2}) {
            ExpSumValue k = symplectic_kloosterman(HalfIntegralForm::scalar(n), HalfIntegralForm::scalar(m),
                                                   Mat2::identity(), 128);
            CHECK(k.terms == 1);
            CHECK(abs(k.value.re - Real(1L, 128)) < Real("1e-35", 128));
            CHECK(abs(k.value.im) < Real("1e-35", 128));
        }
    }
}

TEST_CASE("X(2 I2) has at most 8 classes") {
    auto reps = enumerate_coset_reps(Mat2{2, 0, 0, 2});
    CHECK(reps.size() <= 8);
    CHECK(!reps.empty());
}

TEST_CASE("enumerate rejects singular C") {
    CHECK_THROWS_AS(enumerate_coset_reps(Mat2{1, 1, 2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(symplectic_kloosterman(HalfIntegralForm::scalar(1), HalfIntegralForm::scalar(1),
                                           Mat2{0, 0, 0, 0}, 128),
                    std::invalid_argument);
}

TEST_CASE("fast path matches the brute-force oracle on small C") {
    std::vector<HalfIntegralForm> forms = {HalfIntegralForm::scalar(1), HalfIntegralForm::scalar(2),
                                           HalfIntegralForm::diag(1, 2)};
    int checked = 0;
    for (i64 a = -2; a <= 2; ++a)
        for (i64 b = -2; b <= 2; ++b)
            for (i64 c = -2; c <= 2; ++c)
                for (i64 d = -2; d <= 2; ++d) {
                    Mat2 m{a, b, c, d};
                    i64 det = m.det();
                    if (det == 0 || det > 4 || det < -4) continue;
                    auto fast = enumerate_coset_reps(m);
                    auto slow = oracle::coset_reps(m);
                    REQUIRE(fast.size() == slow.size());
                    // trivial bound |X(C)|^2 <= |det C|^3
                    i64 n = static_cast<i64>(fast.size());
                    CHECK(n * n <= det * det * det * (det < 0 ? -1 : 1));
                    for (const auto& q : forms)
                        for (const auto& t : forms) {
                            auto pf = oracle::phase_multiset(q, t, m, fast);
                            auto ps = oracle::phase_multiset(q, t, m, slow);
                            CHECK(pf == ps);
                        }
                    ++checked;
                }
    CHECK(checked > 100);
}

TEST_CASE("summand invariance under the two-sided lattice action") {
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<i64> xd(-3, 3);
    std::vector<Mat2> cs = {Mat2{1, 0, 0, 2}, Mat2{2, 1, 0, 3}, Mat2{2, 0, 0, 2}, Mat2{1, 2, -1, 1}};
    HalfIntegralForm q{1, 0, 1}, t{2, 1, 3};
    for (const Mat2& c : cs) {
        auto reps = enumerate_coset_reps(c);
        for (const auto& rep : reps) {
            auto base = rep_phase(q, t, c, rep);
            for (int trial = 0; trial < 8; ++trial) {
                Mat2 x{xd(rng), xd(rng), 0, xd(rng)};
                x.c = x.b; // symmetric
                CosetRep shifted_a{Mat2{rep.A.a + x.a * c.a + x.b * c.c,
                                        rep.A.b + x.a * c.b + x.b * c.d,
                                        rep.A.c + x.b * c.a + x.c * c.c,
                                        rep.A.d + x.b * c.b + x.c * c.d},
                                   rep.D};
                CHECK(validate_coset_rep(c, shifted_a.A, shifted_a.D));
                CHECK(rep_phase(q, t, c, shifted_a) == base);

                Mat2 cx = c * x;
                CosetRep shifted_d{rep.A, Mat2{rep.D.a + cx.a, rep.D.b + cx.b,
                                               rep.D.c + cx.c, rep.D.d + cx.d}};
                CHECK(validate_coset_rep(c, shifted_d.A, shifted_d.D));
                CHECK(rep_phase(q, t, c, shifted_d) == base);
            }
        }
    }
}

TEST_CASE("h_sum spec examples") {
    mpfr_prec_t p = 128;
    // delta factor: p4 != s4 -> 0
    ExpSumValue z = h_sum(HalfIntegralForm{1, 0, 2}, HalfIntegralForm{1, 0, 1}, 5, +1, p);
    CHECK(z.value.re.is_zero());
    CHECK(z.value.im.is_zero());

    // c = 1, P = S = I2 -> single term with vanishing exponents
    ExpSumValue one = h_sum(HalfIntegralForm::scalar(1), HalfIntegralForm::scalar(1), 1, +1, p);
    CHECK(one.terms == 1);
    CHECK(abs(one.value.re - Real(1L, p)) < Real("1e-35", p));
    CHECK(abs(one.value.im) < Real("1e-35", p));
}

TEST_CASE("h_sum trivial bound and dual implementation") {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<i64> ad(1, 6);
    std::uniform_int_distribution<i64> cd(1, 25);
    mpfr_prec_t p = 128;
    for (int trial = 0; trial < 60; ++trial) {
        i64 pa = ad(rng), pc = ad(rng), pb = ad(rng) - 3;
        i64 sa = ad(rng), sb = ad(rng) - 3;
        if (4 * pa * pc - pb * pb <= 0 || 4 * sa * pc - sb * sb <= 0) continue;
        HalfIntegralForm P{pa, pb, pc}, S{sa, sb, pc};
        i64 c = cd(rng);
        for (int sign : {+1, -1}) {
            ExpSumValue h = h_sum(P, S, c, sign, p);
            CHECK(h.value.abs() <= Real(c * c, p) + Real("1e-25", p));
            Complex lit = oracle::h_sum_literal(P, S, c, sign, p);
            CHECK(abs(h.value.re - lit.re) < Real("1e-30", p));
            CHECK(abs(h.value.im - lit.im) < Real("1e-30", p));
        }
    }
}

TEST_CASE("h_sum sign structure") {
    mpfr_prec_t p = 128;
    HalfIntegralForm P{3, 2, 5}, Pm{3, -2, 5}, S{2, 1, 5};
    for (i64 c : {1, 2, 3, 4, 5, 7, 12}) {
        // H^+ with p2 -> -p2 equals H^- (the correction factor is trivial)
        ExpSumValue a = h_sum(Pm, S, c, +1, p);
        ExpSumValue b = h_sum(P, S, c, -1, p);
        CHECK(abs(a.value.re - b.value.re) < Real("1e-30", p));
        CHECK(abs(a.value.im - b.value.im) < Real("1e-30", p));
        // H^- is the conjugate of H^+
        ExpSumValue hp = h_sum(P, S, c, +1, p);
        ExpSumValue hm = h_sum(P, S, c, -1, p);
        CHECK(abs(hp.value.re - hm.value.re) < Real("1e-30", p));
        CHECK(abs(hp.value.im + hm.value.im) < Real("1e-30", p));
    }
}

TEST_CASE("h_sum input validation") {
    CHECK_THROWS_AS(h_sum(HalfIntegralForm::scalar(1), HalfIntegralForm::scalar(1), 0, +1, 128),
                    std::invalid_argument);
    CHECK_THROWS_AS(h_sum(HalfIntegralForm::scalar(1), HalfIntegralForm::scalar(1), 3, 2, 128),
                    std::invalid_argument);
}

} // TEST_SUITE
