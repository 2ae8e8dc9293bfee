#include "siegel/kloosterman.hpp"

#include <numeric>
#include <optional>

namespace siegel {

namespace {

bool is_symmetric_pair_left(const Mat2& A, const Mat2& C) {
    // tA C symmetric <=> (tA C)_{12} == (tA C)_{21}
    Mat2 p = A.transpose() * C;
    return p.b == p.c;
}

bool is_symmetric_pair_right(const Mat2& C, const Mat2& D) {
    Mat2 p = C * D.transpose();
    return p.b == p.c;
}

// x * alpha = beta (mod n); returns (x0, step)描述 all solutions, or nullopt.
std::optional<std::pair<i64, i64>> solve_linear_mod(i64 alpha, i64 beta, i64 n) {
    alpha = mod_norm(alpha, n);
    beta = mod_norm(beta, n);
    i64 g = gcd_ll(alpha, n);
    if (g == 0) return beta == 0 ? std::optional<std::pair<i64, i64>>({0, 1}) : std::nullopt;
    if (beta % g != 0) return std::nullopt;
    i64 n2 = n / g;
    i64 x0 = 0;
    if (n2 > 1) x0 = mod_norm((beta / g) % n2 * mod_inverse(alpha / g, n2), n2);
    return std::make_pair(x0, n2);
}

// merge x = r1 (mod m1) with x = r2 (mod m2)
std::optional<std::pair<i64, i64>> merge_congruence(i64 r1, i64 m1, i64 r2, i64 m2) {
    i64 g = gcd_ll(m1, m2);
    if ((r2 - r1) % g != 0) return std::nullopt;
    i64 lcm = m1 / g * m2;
    // r = r1 + m1 * t with t = (r2 - r1)/g * inv(m1/g) mod m2/g
    i64 m2g = m2 / g;
    i64 t = 0;
    if (m2g > 1) t = mod_norm(((r2 - r1) / g) % m2g * mod_inverse((m1 / g) % m2g, m2g), m2g);
    i64 r = mod_norm(r1 + m1 * t, lcm);
    return std::make_pair(r, lcm);
}

struct DiagCosets {
    i64 c1 = 1, c2 = 1;
    std::vector<CosetRep> reps; // w.r.t. C' = diag(c1, c2)
};

// Enumerate X(diag(c1, c2)), c1 | c2.  D runs over the box
// d11 mod c1, t mod c1 (with d21 = (c2/c1) t), d22 mod c2; the A-class is
// solved from the completion congruences and is unique per completable D.
DiagCosets enumerate_diag(i64 c1, i64 c2) {
    DiagCosets out;
    out.c1 = c1;
    out.c2 = c2;
    const i64 m = c2 / c1;
    for (i64 d11 = 0; d11 < c1; ++d11)
        for (i64 t = 0; t < c1; ++t)
            for (i64 d22 = 0; d22 < c2; ++d22) {
                Mat2 D{d11, t, m * t, d22};
                // gcd of the 2x2 minors of (C | D)
                i64 g = c1 * c2;
                g = gcd_ll(g, c1 * m * t);
                g = gcd_ll(g, c1 * d22);
                g = gcd_ll(g, c2 * d11);
                g = gcd_ll(g, c2 * t);
                g = gcd_ll(g, D.det());
                if (g != 1) continue;

                // completion congruences for A = [[a1, m a3], [a3, a4]]:
                //   a1 d11 + a3 m t == 1   (mod c1)
                //   a1 t   + a3 d22 == 0   (mod c1)
                //   a4 m t + m a3 d11 == 0 (mod c2)
                //   a4 d22 + m a3 t == 1   (mod c2)
                int found = 0;
                for (i64 a1 = 0; a1 < c1 && found == 0; ++a1)
                    for (i64 a3 = 0; a3 < c1 && found == 0; ++a3) {
                        if (mod_norm(a1 * d11 + a3 * m * t - 1, c1) != 0) continue;
                        if (mod_norm(a1 * t + a3 * d22, c1) != 0) continue;
                        auto s1 = solve_linear_mod(m * t, mod_norm(-m * a3 * d11, c2), c2);
                        if (!s1) continue;
                        auto s2 = solve_linear_mod(d22, mod_norm(1 - m * a3 * t, c2), c2);
                        if (!s2) continue;
                        auto mg = merge_congruence(s1->first, s1->second, s2->first, s2->second);
                        if (!mg) continue;
                        for (i64 a4 = mg->first; a4 < c2; a4 += mg->second) {
                            Mat2 A{a1, m * a3, a3, a4};
                            Mat2 C{c1, 0, 0, c2};
                            if (!validate_coset_rep(C, A, D)) continue;
                            out.reps.push_back(CosetRep{A, D});
                            ++found;
                            break;
                        }
                    }
            }
    return out;
}

} // namespace

bool validate_coset_rep(const Mat2& C, const Mat2& A, const Mat2& D, Mat2* b_out) {
    if (C.det() == 0) return false;
    if (!is_symmetric_pair_left(A, C)) return false;
    if (!is_symmetric_pair_right(C, D)) return false;
    // B = tC^{-1} (tA D - I); integral iff adj(tC) (tA D - I) == 0 mod det
    Mat2 w = A.transpose() * D;
    w.a -= 1;
    w.d -= 1;
    Mat2 num = C.transpose().adjugate() * w;
    i64 det = C.det();
    for (i64 x : {num.a, num.b, num.c, num.d})
        if (x % det != 0) return false;
    Mat2 B{num.a / det, num.b / det, num.c / det, num.d / det};
    // full symplectic check: tA C = tC A, tB D = tD B, tA D - tC B = I
    Mat2 s1 = A.transpose() * C;
    Mat2 s2 = B.transpose() * D;
    Mat2 s3 = A.transpose() * D;
    Mat2 s4 = C.transpose() * B;
    if (s1.b != s1.c || s2.b != s2.c) return false;
    if (s3.a - s4.a != 1 || s3.b - s4.b != 0 || s3.c - s4.c != 0 || s3.d - s4.d != 1) return false;
    if (b_out) *b_out = B;
    return true;
}

std::vector<CosetRep> enumerate_coset_reps(const Mat2& C) {
    if (C.det() == 0) throw std::invalid_argument("enumerate_coset_reps: singular C");
    Smith2 s = smith_normal_form(C);
    DiagCosets dc = enumerate_diag(s.d1, s.d2);

    // transport back: A = tU1^{-1} A' U2, D = U1 D' t(U2^{-1})
    Mat2 u1_inv_t = s.u1.unimodular_inverse().transpose();
    Mat2 u2_inv_t = s.u2.unimodular_inverse().transpose();
    std::vector<CosetRep> out;
    out.reserve(dc.reps.size());
    for (const CosetRep& r : dc.reps) {
        Mat2 A = u1_inv_t * r.A * s.u2;
        Mat2 D = s.u1 * r.D * u2_inv_t;
        if (!validate_coset_rep(C, A, D))
            throw std::logic_error("enumerate_coset_reps: transported representative failed validation");
        out.push_back(CosetRep{A, D});
    }
    return out;
}

std::pair<i64, i64> rep_phase(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                              const Mat2& C, const CosetRep& rep) {
    // Tr(A C^{-1} Q + C^{-1} D T) = [Tr(A adjC Q2) + Tr(adjC D T2)] / (2 det C)
    // with Q2 = 2Q integral.
    Mat2 adj = C.adjugate();
    Mat2 q2{2 * Q.a, Q.b, Q.b, 2 * Q.c};
    Mat2 t2{2 * T.a, T.b, T.b, 2 * T.c};
    Mat2 p1 = rep.A * adj * q2;
    Mat2 p2 = adj * rep.D * t2;
    i64 num = p1.a + p1.d + p2.a + p2.d;
    i64 den = 2 * C.det();
    if (den < 0) { den = -den; num = -num; }
    num = mod_norm(num, den);
    i64 g = std::gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
    return {num, den};
}

ExpSumValue symplectic_kloosterman(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                                   const Mat2& C, mpfr_prec_t prec) {
    if (C.det() == 0) throw std::invalid_argument("symplectic_kloosterman: singular C");
    Smith2 s = smith_normal_form(C);
    // K(Q, T; C) = K(Q', T'; diag) with Q' = U1^{-1} Q tU1^{-1}, T' = tU2^{-1} T U2^{-1}
    UnimodularMatrix wq{s.u1.unimodular_inverse().transpose()};
    UnimodularMatrix wt{s.u2.unimodular_inverse()};
    HalfIntegralForm qp = wq.transform(Q);
    HalfIntegralForm tp = wt.transform(T);

    DiagCosets dc = enumerate_diag(s.d1, s.d2);
    Mat2 cp{s.d1, 0, 0, s.d2};

    ExpSumValue out;
    out.value = Complex(prec);
    out.terms = static_cast<long>(dc.reps.size());
    for (const CosetRep& r : dc.reps) {
        auto [num, den] = rep_phase(qp, tp, cp, r);
        auto [cr, si] = unit_phase(num, den, prec);
        out.value.re += cr;
        out.value.im += si;
    }
    return out;
}

ExpSumValue h_sum(const HalfIntegralForm& P, const HalfIntegralForm& S,
                  i64 c, int sign, mpfr_prec_t prec) {
    if (c < 1) throw std::invalid_argument("h_sum: c must be >= 1");
    if (sign != 1 && sign != -1) throw std::invalid_argument("h_sum: sign must be +-1");
    ExpSumValue out;
    out.value = Complex(prec);
    if (P.c != S.c) return out; // delta_{s4 = p4}

    const i64 p1 = P.a, p2 = P.b, p4 = P.c;
    const i64 s1 = S.a, s2 = S.b, s4 = S.c;
    (void)p4;

    auto tab = unit_table(c, prec);
    Complex acc(prec);
    long terms = 0;
    for (i64 d1 = 0; d1 < c; ++d1) {
        if (c > 1 && gcd_ll(d1, c) != 1) continue;
        if (c == 1 && d1 != 0) break;
        i64 inv = (c == 1) ? 0 : mod_inverse(d1, c);
        for (i64 d2 = 0; d2 < c; ++d2) {
            // inv*(s4 d2^2 -+ p2 d2 + p1) + s2 d2 + d1 s1  (mod c)
            i64 quad = mod_norm(s4 * d2 % c * d2, c);
            i64 n = quad - sign * mod_norm(p2 * d2, c) + mod_norm(p1, c);
            n = mod_norm(mod_norm(n, c) * inv, c);
            n = mod_norm(n + s2 * d2 + d1 * s1, c);
            acc.re += tab->cs[n];
            acc.im += tab->sn[n];
            ++terms;
        }
    }
    // constant phase e(-+ p2 s2 / (2 c s4))
    auto [cr, si] = unit_phase(-static_cast<i64>(sign) * p2 * s2, 2 * c * s4, prec);
    out.value = acc * Complex{cr, si};
    out.terms = terms;
    return out;
}

} // namespace siegel
