#ifndef SIEGEL_REAL_HPP
#define SIEGEL_REAL_HPP

#include <mpfr.h>

#include <climits>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace siegel {

// Value-semantic wrapper around mpfr_t.  Every Real carries its own
// precision; binary operations round into the wider of the two operand
// precisions.  All rounding is to nearest.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(long long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, static_cast<long>(x), MPFR_RNDN); }
    Real(int x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(unsigned long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_ui(v_, x, MPFR_RNDN); }
    Real(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(const char* s, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_str(v_, s, 10, MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    static Real pi(mpfr_prec_t prec) { Real r(prec); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
    static Real pow2(long e, mpfr_prec_t prec) { Real r(prec); mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN); return r; }

    // in-place ops (operand precision untouched)
    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(long x) { mpfr_mul_si(v_, v_, x, MPFR_RNDN); return *this; }
    Real& operator/=(long x) { mpfr_div_si(v_, v_, x, MPFR_RNDN); return *this; }
    Real& operator*=(unsigned long x) { mpfr_mul_ui(v_, v_, x, MPFR_RNDN); return *this; }
    Real& operator/=(unsigned long x) { mpfr_div_ui(v_, v_, x, MPFR_RNDN); return *this; }
    Real& negate() { mpfr_neg(v_, v_, MPFR_RNDN); return *this; }

    friend Real operator+(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a) { Real r(a); r.negate(); return r; }
    friend Real operator*(const Real& a, long x) { Real r(a); r *= x; return r; }
    friend Real operator*(long x, const Real& a) { return a * x; }
    friend Real operator/(const Real& a, long x) { Real r(a); r /= x; return r; }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long exponent() const { return mpfr_zero_p(v_) ? LONG_MIN : static_cast<long>(mpfr_get_exp(v_)); }
    std::string str(int digits = 0) const;

private:
    static mpfr_prec_t wider(const Real& a, const Real& b) {
        mpfr_prec_t pa = mpfr_get_prec(a.v_), pb = mpfr_get_prec(b.v_);
        return pa > pb ? pa : pb;
    }
    mpfr_t v_;
};

inline Real sqrt(const Real& a) { Real r(a.prec()); mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real abs(const Real& a) { Real r(a.prec()); mpfr_abs(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real sin(const Real& a) { Real r(a.prec()); mpfr_sin(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real cos(const Real& a) { Real r(a.prec()); mpfr_cos(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real exp(const Real& a) { Real r(a.prec()); mpfr_exp(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real log(const Real& a) { Real r(a.prec()); mpfr_log(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real pow(const Real& a, const Real& b) { Real r(a.prec() > b.prec() ? a.prec() : b.prec()); mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r; }
inline Real pow_si(const Real& a, long e) { Real r(a.prec()); mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN); return r; }
inline Real gamma(const Real& a) { Real r(a.prec()); mpfr_gamma(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
inline Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
inline Real to_prec(const Real& a, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}

// e(num/den) = exp(2*pi*i*num/den) split into (cos, sin), with the phase
// reduced exactly as a rational before any rounding.
std::pair<Real, Real> unit_phase(long long num, long long den, mpfr_prec_t prec);

// Shared table of the den-th roots of unity, e(j/den) = (cos[j], sin[j]).
// Entries are immutable once built, so concurrent readers need no locking.
struct UnitTable {
    std::vector<Real> cs, sn;
};
std::shared_ptr<const UnitTable> unit_table(long long den, mpfr_prec_t prec);

struct Complex {
    Real re, im;
    explicit Complex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    friend Complex operator+(Complex a, const Complex& b) { a += b; return a; }
    friend Complex operator-(Complex a, const Complex& b) { a -= b; return a; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        Complex r(a.re.prec() > b.re.prec() ? a.re.prec() : b.re.prec());
        r.re = a.re * b.re - a.im * b.im;
        r.im = a.re * b.im + a.im * b.re;
        return r;
    }
    Complex& scale(const Real& s) { re *= s; im *= s; return *this; }
    Complex conj() const { Complex r(*this); r.im.negate(); return r; }
    Real abs() const { return sqrt(re * re + im * im); }
};

} // namespace siegel

#endif
