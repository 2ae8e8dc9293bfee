#include "siegel/intmat.hpp"

namespace siegel {

i64 gcd_ll(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { i64 t = a % b; a = b; b = t; }
    return a;
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        if (a < 0) { x = -1; y = 0; return -a; }
        x = 1; y = 0;
        return a;
    }
    i64 x1, y1;
    i64 g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

i64 mod_norm(i64 a, i64 m) {
    a %= m;
    if (a < 0) a += m;
    return a;
}

i64 mod_inverse(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 x, y;
    i64 g = ext_gcd(mod_norm(a, m), m, x, y);
    if (g != 1) throw std::invalid_argument("mod_inverse: not coprime");
    return mod_norm(x, m);
}

Smith2 smith_normal_form(const Mat2& c) {
    if (c.det() == 0) throw std::invalid_argument("smith_normal_form: singular matrix");
    // Invariant: m == l * c * r with l, r in GL2(Z).
    Mat2 m = c;
    Mat2 l = Mat2::identity(), r = Mat2::identity();

    auto swap_rows = [&] {
        m = Mat2{m.c, m.d, m.a, m.b};
        l = Mat2{l.c, l.d, l.a, l.b};
    };
    auto swap_cols = [&] {
        m = Mat2{m.b, m.a, m.d, m.c};
        r = Mat2{r.b, r.a, r.d, r.c};
    };
    auto row2_sub = [&](i64 q) { // row2 -= q * row1
        m.c -= q * m.a; m.d -= q * m.b;
        l.c -= q * l.a; l.d -= q * l.b;
    };
    auto col2_sub = [&](i64 q) { // col2 -= q * col1
        m.b -= q * m.a; m.d -= q * m.c;
        r.b -= q * r.a; r.d -= q * r.c;
    };

    auto diagonalize = [&] {
        while (true) {
            if (m.a == 0) { swap_rows(); continue; }
            if (m.c != 0) {
                row2_sub(m.c / m.a);
                if (m.c != 0) swap_rows();
                continue;
            }
            if (m.b != 0) {
                col2_sub(m.b / m.a);
                if (m.b != 0) swap_cols();
                continue;
            }
            break;
        }
    };

    diagonalize();
    while (m.d % m.a != 0) {
        // col1 += col2, then rediagonalize; puts gcd(d1, d2) in position (1,1)
        m.a += m.b; m.c += m.d;
        r.a += r.b; r.c += r.d;
        diagonalize();
    }
    if (m.a < 0) { // negate column 1
        m.a = -m.a;
        r.a = -r.a; r.c = -r.c;
    }
    if (m.d < 0) { // negate column 2
        m.d = -m.d;
        r.b = -r.b; r.d = -r.d;
    }

    // m = l * c * r  =>  c = l^{-1} * diag * r^{-1}
    Smith2 s;
    s.d1 = m.a;
    s.d2 = m.d;
    s.u1 = l.unimodular_inverse();
    s.u2 = r.unimodular_inverse();
    return s;
}

} // namespace siegel
