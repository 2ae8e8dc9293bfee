#ifndef SIEGEL_FORMS_HPP
#define SIEGEL_FORMS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "siegel/intmat.hpp"
#include "siegel/real.hpp"

namespace siegel {

// Positive definite symmetric half-integral 2x2 matrix [[a, b/2], [b/2, c]].
// b stores twice the off-diagonal entry so all arithmetic stays integral.
struct HalfIntegralForm {
    i64 a, b, c;

    HalfIntegralForm(i64 a_, i64 b_, i64 c_) : a(a_), b(b_), c(c_) {
        if (a < 1 || c < 1 || disc4() <= 0)
            throw std::invalid_argument("HalfIntegralForm: not positive definite");
    }
    static HalfIntegralForm scalar(i64 n) { return {n, 0, n}; }
    static HalfIntegralForm diag(i64 p, i64 q) { return {p, 0, q}; }

    i64 disc4() const { return 4 * a * c - b * b; } // 4 * det
    i64 trace() const { return a + c; }
    // value of the quadratic form at an integer vector: (x y) F (x y)^t
    i64 value_at(i64 x, i64 y) const { return a * x * x + b * x * y + c * y * y; }
    Real det(mpfr_prec_t prec) const {
        Real d(disc4(), prec);
        d /= 4L;
        return d;
    }
    friend bool operator==(const HalfIntegralForm&, const HalfIntegralForm&) = default;
};

// Element of GL2(Z): integer matrix with determinant +-1.
struct UnimodularMatrix {
    Mat2 m;

    explicit UnimodularMatrix(Mat2 mat) : m(mat) {
        i64 d = m.det();
        if (d != 1 && d != -1) throw std::invalid_argument("UnimodularMatrix: |det| != 1");
    }
    static UnimodularMatrix identity() { return UnimodularMatrix(Mat2::identity()); }
    UnimodularMatrix inverse() const { return UnimodularMatrix(m.unimodular_inverse()); }
    // tU * f * U, exact on (a, b, c)
    HalfIntegralForm transform(const HalfIntegralForm& f) const;
    friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y) {
        return UnimodularMatrix(x.m * y.m);
    }
    friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;
};

// Canonical representative of the GL2(Z)-class of a form, with witness.
struct FormClassData {
    HalfIntegralForm reduced;
    UnimodularMatrix transform; // tU * original * U = reduced
};

// Gauss reduction to the canonical representative 0 <= b <= a <= c.
FormClassData reduce(const HalfIntegralForm& form);

// Witness U with tU q U = t when the forms are GL2(Z)-equivalent.
std::optional<UnimodularMatrix> is_equivalent(const HalfIntegralForm& q, const HalfIntegralForm& t);

// Aut(t) = { U in GL2(Z) : tU t U = t }, complete finite list.
std::vector<UnimodularMatrix> automorphisms(const HalfIntegralForm& t);

// (lambda_min, lambda_max) of the form matrix [[a, b/2], [b/2, c]].
std::pair<Real, Real> eigenvalue_bounds(const HalfIntegralForm& t, mpfr_prec_t prec = 128);

} // namespace siegel

#endif
