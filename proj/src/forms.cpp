#include "siegel/forms.hpp"

#include <cmath>

namespace siegel {

HalfIntegralForm UnimodularMatrix::transform(const HalfIntegralForm& f) const {
    // columns of U
    i64 u1 = m.a, u2 = m.b, u3 = m.c, u4 = m.d;
    i64 na = f.value_at(u1, u3);
    i64 nc = f.value_at(u2, u4);
    // 2 * (col1)^t F (col2)
    i64 nb = 2 * f.a * u1 * u2 + f.b * (u1 * u4 + u2 * u3) + 2 * f.c * u3 * u4;
    return {na, nb, nc};
}

FormClassData reduce(const HalfIntegralForm& form) {
    i64 a = form.a, b = form.b, c = form.c;
    Mat2 u = Mat2::identity();

    auto apply_col = [&](const Mat2& s) { u = u * s; };

    // Gauss reduction, then normalize the sign of b; the canonical
    // representative of a GL2(Z)-class satisfies 0 <= b <= a <= c.
    while (true) {
        if (a > c) {
            // swap via [[0, -1], [1, 0]]
            std::swap(a, c);
            b = -b;
            apply_col(Mat2{0, -1, 1, 0});
            continue;
        }
        if (b > a || b < -a) {
            // translate via [[1, -t], [0, 1]]: b -> b - 2 t a
            i64 t = static_cast<i64>(std::llround(static_cast<double>(b) / (2.0 * static_cast<double>(a))));
            // exact rounding fix-up for large values
            while (b - 2 * t * a > a) ++t;
            while (b - 2 * t * a < -a) --t;
            c = a * t * t - b * t + c;
            b = b - 2 * t * a;
            apply_col(Mat2{1, -t, 0, 1});
            continue;
        }
        break;
    }
    if (b < 0) {
        // [[-1, 0], [0, 1]] flips the sign of b (improper transformation)
        b = -b;
        apply_col(Mat2{-1, 0, 0, 1});
    }
    // the b -> -b flip can break a <= c ordering only when a == c, which it doesn't
    return FormClassData{HalfIntegralForm{a, b, c}, UnimodularMatrix{u}};
}

std::optional<UnimodularMatrix> is_equivalent(const HalfIntegralForm& q, const HalfIntegralForm& t) {
    FormClassData rq = reduce(q);
    FormClassData rt = reduce(t);
    if (!(rq.reduced == rt.reduced)) return std::nullopt;
    // tUq q Uq = R = tUt t Ut  =>  U = Uq * Ut^{-1} carries q to t
    return rq.transform * rt.transform.inverse();
}

std::vector<UnimodularMatrix> automorphisms(const HalfIntegralForm& t) {
    // A column u of an automorphism satisfies t[u] = a or c, so
    // |u|^2 <= max(a, c) / lambda_min.  Rationalized:
    //   1 / lambda_min = 2 (a + c + sqrt((a-c)^2 + b^2)) / (4ac - b^2).
    i64 disc = (t.a - t.c) * (t.a - t.c) + t.b * t.b;
    i64 sq = static_cast<i64>(std::sqrt(static_cast<double>(disc)));
    while (sq * sq < disc) ++sq;
    i64 mx = t.a > t.c ? t.a : t.c;
    i64 bound2 = (2 * mx * (t.a + t.c + sq)) / t.disc4() + 1;
    i64 bnd = static_cast<i64>(std::sqrt(static_cast<double>(bound2)));
    while (bnd * bnd < bound2) ++bnd;

    std::vector<UnimodularMatrix> out;
    for (i64 u1 = -bnd; u1 <= bnd; ++u1)
        for (i64 u3 = -bnd; u3 <= bnd; ++u3) {
            if (t.value_at(u1, u3) != t.a) continue;
            for (i64 u2 = -bnd; u2 <= bnd; ++u2)
                for (i64 u4 = -bnd; u4 <= bnd; ++u4) {
                    i64 det = u1 * u4 - u2 * u3;
                    if (det != 1 && det != -1) continue;
                    if (t.value_at(u2, u4) != t.c) continue;
                    i64 off2 = 2 * t.a * u1 * u2 + t.b * (u1 * u4 + u2 * u3) + 2 * t.c * u3 * u4;
                    if (off2 != t.b) continue;
                    out.push_back(UnimodularMatrix{Mat2{u1, u2, u3, u4}});
                }
        }
    return out;
}

std::pair<Real, Real> eigenvalue_bounds(const HalfIntegralForm& t, mpfr_prec_t prec) {
    Real tr(t.trace(), prec);
    Real disc((t.a - t.c) * (t.a - t.c) + t.b * t.b, prec);
    Real root = sqrt(disc);
    Real lo = (tr - root) / 2L;
    Real hi = (tr + root) / 2L;
    return {lo, hi};
}

} // namespace siegel
