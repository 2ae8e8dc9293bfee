#ifndef SIEGEL_KITAOKA_HPP
#define SIEGEL_KITAOKA_HPP

#include <map>
#include <vector>

#include "siegel/bessel.hpp"
#include "siegel/forms.hpp"
#include "siegel/kloosterman.hpp"

namespace siegel {

struct WeightContext {
    int k;
    BesselOrder l;   // l = k - 3/2
    Real c_k;        // (pi^{1/2}/4) (4 pi)^{3-2k} Gamma(k-3/2) Gamma(k-2)
    PrecisionContext precision;

    static WeightContext make(int k, PrecisionContext ctx = {});
};

enum class TailMode { envelope, doubling };

struct TruncationPolicy {
    int rank1_c_max = 48;
    int rank1_s_max = 48;
    int rank2_norm_max = 6; // max-entry shell radius for C
    TailMode tail_mode = TailMode::envelope;
    double requested_tail = 0.0; // 0 = no hard target; > 0 enforced by fourier_coefficient

    void validate() const {
        if (rank1_c_max < 1 || rank1_s_max < 1 || rank2_norm_max < 1)
            throw std::invalid_argument("TruncationPolicy: radii must be >= 1");
    }
    TruncationPolicy doubled() const {
        TruncationPolicy p = *this;
        p.rank1_c_max *= 2;
        p.rank1_s_max *= 2;
        p.rank2_norm_max *= 2;
        return p;
    }
};

struct TruncationTargetError : std::runtime_error {
    double achieved;
    TruncationTargetError(const std::string& msg, double achieved_)
        : std::runtime_error(msg), achieved(achieved_) {}
};

struct CoefficientBreakdown {
    Real rank0;
    Complex rank1, rank2, total;
    Real tail_bound;             // certified bound on the omitted mass
    Real rank1_tail, rank2_tail; // envelope components of tail_bound
    Real quad_error;             // accumulated quadrature certificates
    TruncationPolicy policy;
    WeightContext weight;
};

struct RankTerm {
    Complex value;
    Real tail;
    Real quad_error;
};

// delta_{Q ~ T} #Aut(T), exact.
long rank0_term(const HalfIntegralForm& Q, const HalfIntegralForm& T);

// Classes of primitive vectors (x, y) mod +-1 with F[(x, y)] = s <= s_max,
// each completed canonically to M in SL2(Z) with bottom row (x, y); the
// stored form is M F tM (bottom-right entry s).
std::map<i64, std::vector<HalfIntegralForm>> primitive_classes(const HalfIntegralForm& f, i64 s_max);

// s-values contributing to the rank-1 sum for (Q, T) under the given policy.
std::vector<i64> rank1_s_support(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                                 const TruncationPolicy& pol);

RankTerm rank1_term(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                    const WeightContext& w, const TruncationPolicy& pol, int threads = 0);
RankTerm rank2_term(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                    const WeightContext& w, const TruncationPolicy& pol, int threads = 0);

// Plain sequential reference implementations of the two parallel kernels.
RankTerm rank1_term_serial(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                           const WeightContext& w, const TruncationPolicy& pol);
RankTerm rank2_term_serial(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                           const WeightContext& w, const TruncationPolicy& pol);

CoefficientBreakdown fourier_coefficient(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                                         const WeightContext& w, const TruncationPolicy& pol,
                                         int threads = 0);

} // namespace siegel

#endif
