#ifndef SIEGEL_INTMAT_HPP
#define SIEGEL_INTMAT_HPP

#include <array>
#include <cstdint>
#include <stdexcept>

namespace siegel {

using i64 = long long;

// 2x2 integer matrix [[a, b], [c, d]].
struct Mat2 {
    i64 a = 0, b = 0, c = 0, d = 0;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    i64 det() const { return a * d - b * c; }
    Mat2 transpose() const { return {a, c, b, d}; }
    Mat2 adjugate() const { return {d, -b, -c, a}; }
    Mat2 neg() const { return {-a, -b, -c, -d}; }
    i64 max_abs() const {
        i64 m = 0;
        for (i64 x : {a, b, c, d}) { if (x < 0) x = -x; if (x > m) m = x; }
        return m;
    }
    i64 frob2() const { return a * a + b * b + c * c + d * d; } // Tr(C tC)
    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const Mat2& x, const Mat2& y) = default;
    // inverse of a matrix with det = +-1
    Mat2 unimodular_inverse() const {
        i64 dt = det();
        if (dt != 1 && dt != -1) throw std::invalid_argument("unimodular_inverse: |det| != 1");
        Mat2 adj = adjugate();
        if (dt == -1) adj = adj.neg();
        return adj;
    }
};

// C = u1 * diag(d1, d2) * u2 with d1 | d2, d1, d2 > 0 and u1, u2 in GL2(Z).
struct Smith2 {
    Mat2 u1, u2;
    i64 d1 = 1, d2 = 1;
};

Smith2 smith_normal_form(const Mat2& c);

i64 gcd_ll(i64 a, i64 b);
// g = gcd(a, b) plus x, y with a*x + b*y = g
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);
// inverse of a modulo m (m >= 1, gcd(a, m) = 1)
i64 mod_inverse(i64 a, i64 m);
i64 mod_norm(i64 a, i64 m); // representative in [0, m)

} // namespace siegel

#endif
