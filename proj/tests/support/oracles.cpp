#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace siegel::oracle {

namespace {

bool symmetric_pair(const Mat2& c, const Mat2& d) {
    Mat2 p = c * d.transpose();
    return p.b == p.c;
}

i64 minor_gcd(const Mat2& c, const Mat2& d) {
    // 2x2 minors of the 2x4 block (C | D)
    i64 g = c.det();
    g = gcd_ll(g, c.a * d.c - c.c * d.a);
    g = gcd_ll(g, c.a * d.d - c.c * d.b);
    g = gcd_ll(g, c.b * d.c - c.d * d.a);
    g = gcd_ll(g, c.b * d.d - c.d * d.b);
    g = gcd_ll(g, d.det());
    return g < 0 ? -g : g;
}

struct ClassKey {
    i64 a, b, d;
    friend bool operator<(const ClassKey& x, const ClassKey& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.d < y.d;
    }
};

// fractional part of C^{-1} D, which classifies D mod {C X}
ClassKey class_key(const Mat2& c, const Mat2& d) {
    Mat2 w = c.adjugate() * d;
    i64 den = c.det();
    if (den < 0) {
        den = -den;
        w = w.neg();
    }
    return ClassKey{mod_norm(w.a, den), mod_norm(w.b, den), mod_norm(w.d, den)};
}

} // namespace

std::vector<CosetRep> coset_reps(const Mat2& c) {
    if (c.det() == 0) throw std::invalid_argument("oracle: singular C");
    const i64 box = c.max_abs() + 1;
    std::map<ClassKey, Mat2> classes;
    for (i64 a = -box; a <= box; ++a)
        for (i64 b = -box; b <= box; ++b)
            for (i64 e = -box; e <= box; ++e)
                for (i64 f = -box; f <= box; ++f) {
                    Mat2 d{a, b, e, f};
                    if (!symmetric_pair(c, d)) continue;
                    if (minor_gcd(c, d) != 1) continue;
                    classes.emplace(class_key(c, d), d);
                }

    std::vector<CosetRep> out;
    for (const auto& [key, d] : classes) {
        bool found = false;
        for (i64 a = -box; a <= box && !found; ++a)
            for (i64 b = -box; b <= box && !found; ++b)
                for (i64 e = -box; e <= box && !found; ++e)
                    for (i64 f = -box; f <= box && !found; ++f) {
                        Mat2 am{a, b, e, f};
                        if (!validate_coset_rep(c, am, d)) continue;
                        out.push_back(CosetRep{am, d});
                        found = true;
                    }
        if (!found)
            throw std::logic_error("oracle: coprime symmetric pair admitted no completion in the box");
    }
    return out;
}

Complex kloosterman_sum(const HalfIntegralForm& q, const HalfIntegralForm& t,
                        const Mat2& c, const std::vector<CosetRep>& reps, mpfr_prec_t prec) {
    Complex acc(prec);
    for (const CosetRep& r : reps) {
        // Tr(A C^{-1} Q + C^{-1} D T), denominator 2 det C
        Mat2 adj = c.adjugate();
        Mat2 q2{2 * q.a, q.b, q.b, 2 * q.c};
        Mat2 t2{2 * t.a, t.b, t.b, 2 * t.c};
        Mat2 m1 = r.A * adj * q2;
        Mat2 m2 = adj * r.D * t2;
        auto [cr, si] = unit_phase(m1.a + m1.d + m2.a + m2.d, 2 * c.det(), prec);
        acc.re += cr;
        acc.im += si;
    }
    return acc;
}

std::vector<std::pair<i64, i64>> phase_multiset(const HalfIntegralForm& q, const HalfIntegralForm& t,
                                                const Mat2& c, const std::vector<CosetRep>& reps) {
    std::vector<std::pair<i64, i64>> out;
    for (const CosetRep& r : reps) {
        Mat2 adj = c.adjugate();
        Mat2 q2{2 * q.a, q.b, q.b, 2 * q.c};
        Mat2 t2{2 * t.a, t.b, t.b, 2 * t.c};
        Mat2 m1 = r.A * adj * q2;
        Mat2 m2 = adj * r.D * t2;
        i64 num = m1.a + m1.d + m2.a + m2.d;
        i64 den = 2 * c.det();
        if (den < 0) { den = -den; num = -num; }
        num = mod_norm(num, den);
        i64 g = std::gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
        out.emplace_back(num, den);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Real bessel_closed_form(long two_l, const Real& x, mpfr_prec_t prec) {
    double xd = x.to_double();
    double lv = static_cast<double>(two_l) / 2.0;
    double amp_bits = 0.0;
    if (xd < lv) amp_bits = lv * std::max(0.0, std::log2(2.0 * lv / xd));
    mpfr_prec_t work = prec + 64 + static_cast<mpfr_prec_t>(amp_bits);

    Real xw = to_prec(x, work);
    Real pref = sqrt(Real(2L, work) / (Real::pi(work) * xw));
    Real jm = pref * sin(xw);                           // J_{1/2}
    Real j = pref * (sin(xw) / xw - cos(xw));           // J_{3/2}
    if (two_l == 1) return to_prec(jm, prec);
    for (long two_nu = 3; two_nu < two_l; two_nu += 2) {
        // J_{nu+1} = (2 nu / x) J_nu - J_{nu-1}
        Real jp = j;
        jp *= two_nu;
        jp /= xw;
        jp -= jm;
        jm = std::move(j);
        j = std::move(jp);
    }
    return to_prec(j, prec);
}

Complex h_sum_literal(const HalfIntegralForm& p, const HalfIntegralForm& s,
                      i64 c, int sign, mpfr_prec_t prec) {
    Complex acc(prec);
    if (p.c != s.c) return acc;
    const i64 p1 = p.a, p2 = p.b, s1 = s.a, s2 = s.b, s4 = s.c;
    for (i64 d1 = 0; d1 < c; ++d1) {
        if (c > 1 && gcd_ll(d1, c) != 1) continue;
        if (c == 1 && d1 != 0) break;
        i64 inv = (c == 1) ? 0 : mod_inverse(d1, c);
        for (i64 d2 = 0; d2 < c; ++d2) {
            i64 inner = inv * s4 * d2 * d2 - sign * inv * p2 * d2 + s2 * d2 + inv * p1 + d1 * s1;
            // inner/c -+ p2 s2 / (2 c s4) over the common denominator 2 c s4
            i64 num = 2 * s4 * inner - sign * p2 * s2;
            auto [cr, si] = unit_phase(num, 2 * c * s4, prec);
            acc.re += cr;
            acc.im += si;
        }
    }
    return acc;
}

} // namespace siegel::oracle
