#ifndef SIEGEL_BESSEL_HPP
#define SIEGEL_BESSEL_HPP

#include <stdexcept>
#include <vector>

#include "siegel/real.hpp"

namespace siegel {

// Half-integer Bessel order l, stored exactly as 2l (an odd positive integer).
// Weight-derived orders use l = k - 3/2 with even k >= 6, so l >= 9/2 there;
// smaller odd 2l are accepted for direct evaluation.
struct BesselOrder {
    long two_l;

    explicit BesselOrder(long two_l_) : two_l(two_l_) {
        if (two_l < 1 || two_l % 2 == 0)
            throw std::invalid_argument("BesselOrder: 2l must be an odd positive integer");
    }
    static BesselOrder from_weight(int k) {
        if (k < 6 || k % 2 != 0)
            throw std::invalid_argument("BesselOrder: weight must be even and >= 6");
        return BesselOrder(2L * k - 3);
    }
    double value() const { return static_cast<double>(two_l) / 2.0; }
    Real as_real(mpfr_prec_t prec) const {
        Real l(two_l, prec);
        l /= 2L;
        return l;
    }
};

struct PrecisionContext {
    mpfr_prec_t bits = 128;
    int quad_nodes = 16;        // starting Gauss-Legendre level
    double tail_target = 1e-12; // absolute target for quadrature certificates

    void validate() const {
        if (bits < 64) throw std::invalid_argument("PrecisionContext: bits must be >= 64");
        if (quad_nodes < 16) throw std::invalid_argument("PrecisionContext: quad_nodes must be >= 16");
    }
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// J_l(x) for x > 0; ascending series for x <= l, series-seeded downward
// recurrence otherwise.  Relative error <= 2^{-bits+8}.
Real bessel_j(const BesselOrder& l, const Real& x, const PrecisionContext& ctx);

// The two internal paths, exposed so they can be cross-checked directly.
Real bessel_j_series(const BesselOrder& l, const Real& x, mpfr_prec_t out_prec);
Real bessel_j_recurrence(const BesselOrder& l, const Real& x, mpfr_prec_t out_prec);

// Dominating envelope (c*x/l)^l for |J_l(x)|, valid for any c > e/2.
Real bessel_bound(const BesselOrder& l, const Real& x, double c = 1.4);

struct JJResult {
    Real value;
    Real error;     // node-doubling agreement at the accepted level
    int nodes = 0;  // node count of the accepted level
};

// JJ(P) = int_0^{pi/2} J_l(4 pi s1 sin t) J_l(4 pi s2 sin t) sin t dt,
// Gauss-Legendre with node doubling until successive levels agree below
// ctx.tail_target; exceeding node_limit raises QuadratureError.  Symmetric
// in (s1, s2) by construction.
JJResult jj_integral(const BesselOrder& l, const Real& s1, const Real& s2,
                     const PrecisionContext& ctx, int node_limit = 1 << 14);

// Gauss-Legendre nodes/weights on [-1, 1], cached by (n, prec).
struct GaussLegendre {
    std::vector<Real> nodes, weights;
};
std::shared_ptr<const GaussLegendre> gauss_legendre(int n, mpfr_prec_t prec);

} // namespace siegel

#endif
