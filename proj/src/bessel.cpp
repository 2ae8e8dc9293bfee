#include "siegel/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace siegel {

namespace {

// One pass of the ascending series at a fixed working precision.
// Reports the cancellation actually encountered so the caller can retry.
struct SeriesPass {
    Real sum;
    long cancel_bits; // log2(max |term| / |sum|)
    bool converged;
};

SeriesPass series_pass(long two_l, const Real& x, mpfr_prec_t work) {
    Real xw = to_prec(x, work);
    Real half_x = xw / 2L;
    Real l_real(two_l, work);
    l_real /= 2L;

    // t0 = (x/2)^l / Gamma(l+1)
    Real t0 = pow(half_x, l_real);
    Real g = l_real;
    g += Real(1L, work);
    t0 /= gamma(g);

    Real x2 = xw * xw;
    Real term = t0;
    Real sum = t0;
    long max_exp = term.exponent();

    double xd = x.to_double();
    long hard_cap = 64 + static_cast<long>(10.0 * xd) + static_cast<long>(work);
    bool converged = false;
    for (long m = 0; m <= hard_cap; ++m) {
        // t_{m+1} = -t_m * x^2 / (2 (m+1) (2m + 2l + 2))
        unsigned long dm1 = static_cast<unsigned long>(2 * (m + 1));
        unsigned long dm2 = static_cast<unsigned long>(2 * m + two_l + 2);
        term *= x2;
        term /= dm1;
        term /= dm2;
        term.negate();
        sum += term;
        if (term.exponent() > max_exp) max_exp = term.exponent();
        // terms decrease monotonically once (m+1)(m+l+1) > x^2/4
        bool decreasing = static_cast<double>(m + 1) * (static_cast<double>(m + 1) + xd) > xd * xd / 4.0;
        if (decreasing && !term.is_zero() &&
            (sum.is_zero() || term.exponent() < sum.exponent() - static_cast<long>(work) - 4)) {
            converged = true;
            break;
        }
        if (term.is_zero()) {
            converged = true;
            break;
        }
    }

    SeriesPass out{sum, 0, converged};
    if (sum.is_zero())
        out.cancel_bits = static_cast<long>(work);
    else
        out.cancel_bits = std::max(0L, max_exp - sum.exponent());
    return out;
}

} // namespace

Real bessel_j_series(const BesselOrder& l, const Real& x, mpfr_prec_t out_prec) {
    if (x.sign() <= 0) throw std::invalid_argument("bessel_j: x must be positive");
    double xd = x.to_double();
    long extra = static_cast<long>(0.8 * xd) + 32;
    for (int attempt = 0; attempt < 6; ++attempt) {
        mpfr_prec_t work = out_prec + 16 + extra;
        SeriesPass p = series_pass(l.two_l, x, work);
        if (!p.converged) throw RangeError("bessel_j_series: term budget exhausted before convergence");
        if (!p.sum.is_finite()) throw RangeError("bessel_j_series: value left representable range");
        if (p.cancel_bits + static_cast<long>(out_prec) + 12 <= static_cast<long>(work))
            return to_prec(p.sum, out_prec);
        extra = p.cancel_bits + 48;
    }
    throw RangeError("bessel_j_series: cancellation exceeded retry budget");
}

Real bessel_j_recurrence(const BesselOrder& l, const Real& x, mpfr_prec_t out_prec) {
    if (x.sign() <= 0) throw std::invalid_argument("bessel_j: x must be positive");
    double xd = x.to_double();
    // Seed high enough above the turning point that the seeds are cheap and
    // the downward direction keeps J dominant.
    long two_start = 2 * static_cast<long>(1.15 * xd + 24.0) + 1;
    if (two_start < l.two_l + 4) two_start = l.two_l + 4;
    if ((two_start - l.two_l) % 2 != 0) ++two_start;

    long steps = (two_start - l.two_l) / 2;
    mpfr_prec_t work = out_prec + 48 + static_cast<mpfr_prec_t>(std::log2(static_cast<double>(steps + 2)) * 2);
    Real xw = to_prec(x, work);

    Real jp1 = bessel_j_series(BesselOrder(two_start + 2), xw, work); // J_{L+1}
    Real j = bessel_j_series(BesselOrder(two_start), xw, work);       // J_L
    for (long two_nu = two_start; two_nu > l.two_l; two_nu -= 2) {
        // J_{nu-1} = (2 nu / x) J_nu - J_{nu+1}
        Real jm1 = j;
        jm1 *= two_nu;
        jm1 /= xw;
        jm1 -= jp1;
        jp1 = std::move(j);
        j = std::move(jm1);
    }
    if (!j.is_finite()) throw RangeError("bessel_j_recurrence: value left representable range");
    return to_prec(j, out_prec);
}

Real bessel_j(const BesselOrder& l, const Real& x, const PrecisionContext& ctx) {
    ctx.validate();
    if (x.to_double() <= l.value()) return bessel_j_series(l, x, ctx.bits);
    return bessel_j_recurrence(l, x, ctx.bits);
}

Real bessel_bound(const BesselOrder& l, const Real& x, double c) {
    if (c <= std::exp(1.0) / 2.0)
        throw std::invalid_argument("bessel_bound: constant must exceed e/2");
    mpfr_prec_t prec = x.prec();
    Real lr = l.as_real(prec);
    Real base = Real(c, prec) * x / lr;
    return pow(base, lr);
}

namespace {
std::mutex gl_mutex;
std::map<std::pair<int, mpfr_prec_t>, std::shared_ptr<const GaussLegendre>> gl_cache;

// P_n(u) and P_{n-1}(u) by upward recurrence.
void legendre_pair(int n, const Real& u, Real& pn, Real& pnm1, mpfr_prec_t prec) {
    Real p0(1L, prec), p1 = to_prec(u, prec);
    if (n == 0) { pn = p0; pnm1 = Real(0L, prec); return; }
    for (int k = 1; k < n; ++k) {
        // (k+1) P_{k+1} = (2k+1) u P_k - k P_{k-1}
        Real p2 = u * p1;
        p2 *= static_cast<long>(2 * k + 1);
        Real t = p0;
        t *= static_cast<long>(k);
        p2 -= t;
        p2 /= static_cast<long>(k + 1);
        p0 = std::move(p1);
        p1 = std::move(p2);
    }
    pn = p1;
    pnm1 = p0;
}
} // namespace

std::shared_ptr<const GaussLegendre> gauss_legendre(int n, mpfr_prec_t prec) {
    {
        std::lock_guard<std::mutex> lock(gl_mutex);
        auto it = gl_cache.find({n, prec});
        if (it != gl_cache.end()) return it->second;
    }
    auto out = std::make_shared<GaussLegendre>();
    out->nodes.assign(n, Real(prec));
    out->weights.assign(n, Real(prec));

    mpfr_prec_t work = prec + 16;
    Real one(1L, work);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-flavored initial guess, then Newton.
        double guess = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        Real u(guess, work);
        Real pn(work), pnm1(work);
        for (int iter = 0; iter < 64; ++iter) {
            legendre_pair(n, u, pn, pnm1, work);
            // P'_n(u) = n (u P_n - P_{n-1}) / (u^2 - 1)
            Real du = u * pn - pnm1;
            du *= static_cast<long>(n);
            Real denom = u * u - one;
            du /= denom;
            Real delta = pn / du;
            u -= delta;
            if (delta.is_zero() || delta.exponent() < u.exponent() - static_cast<long>(work) + 4) break;
        }
        legendre_pair(n, u, pn, pnm1, work);
        Real dpn = u * pn - pnm1;
        dpn *= static_cast<long>(n);
        dpn /= (u * u - one);
        Real w = Real(2L, work) / ((one - u * u) * dpn * dpn);

        // mirror so that the node set is exactly symmetric
        out->nodes[i] = to_prec(u, prec);
        out->weights[i] = to_prec(w, prec);
        out->nodes[n - 1 - i] = to_prec(-u, prec);
        out->weights[n - 1 - i] = out->weights[i];
    }
    if (n % 2 == 1) {
        out->nodes[n / 2] = Real(0L, prec);
        Real u(0L, work), pn(work), pnm1(work);
        legendre_pair(n, u, pn, pnm1, work);
        Real dpn = -pnm1; // u = 0
        dpn *= static_cast<long>(n);
        dpn /= (u * u - one);
        out->weights[n / 2] = to_prec(Real(2L, work) / (dpn * dpn), prec);
    }

    std::lock_guard<std::mutex> lock(gl_mutex);
    auto [it, inserted] = gl_cache.try_emplace({n, prec}, out);
    return it->second;
}

namespace {

Real jj_level(const BesselOrder& l, const Real& s1, const Real& s2,
              int n, mpfr_prec_t bits) {
    auto gl = gauss_legendre(n, bits);
    Real pi = Real::pi(bits);
    Real quarter_pi = pi / 4L;
    Real four_pi = pi * 4L;
    Real a1 = four_pi * to_prec(s1, bits);
    Real a2 = four_pi * to_prec(s2, bits);
    bool equal_args = (s1 == s2);

    PrecisionContext jctx;
    jctx.bits = bits;

    Real acc(0L, bits);
    for (int i = 0; i < n; ++i) {
        // theta = pi/4 * (u + 1)
        Real theta = gl->nodes[i];
        theta += Real(1L, bits);
        theta *= quarter_pi;
        Real st = sin(theta);
        Real f = bessel_j(l, a1 * st, jctx);
        if (equal_args) {
            f *= f;
        } else {
            f *= bessel_j(l, a2 * st, jctx);
        }
        f *= st;
        f *= gl->weights[i];
        acc += f;
    }
    acc *= quarter_pi;
    return acc;
}

} // namespace

JJResult jj_integral(const BesselOrder& l, const Real& s1, const Real& s2,
                     const PrecisionContext& ctx, int node_limit) {
    ctx.validate();
    if (s1.sign() <= 0 || s2.sign() <= 0)
        throw std::invalid_argument("jj_integral: eigenvalue roots must be positive");

    Real tol(ctx.tail_target, ctx.bits);
    int n = ctx.quad_nodes;

    Real prev = jj_level(l, s1, s2, n, ctx.bits);
    while (true) {
        int n2 = 2 * n;
        if (n2 > node_limit)
            throw QuadratureError("jj_integral: no convergence below target within node budget");
        Real cur = jj_level(l, s1, s2, n2, ctx.bits);
        Real err = abs(cur - prev);
        if (err <= tol) return JJResult{cur, err, n2};
        prev = std::move(cur);
        n = n2;
    }
}

} // namespace siegel
