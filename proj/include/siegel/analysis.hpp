#ifndef SIEGEL_ANALYSIS_HPP
#define SIEGEL_ANALYSIS_HPP

#include <vector>

#include "siegel/kitaoka.hpp"

namespace siegel {

// Matrix of Fourier coefficients A(P_{mI2}, nI2) over an index set, with
// per-entry certified tails; optionally normalized by (m/n)^l.
struct SeriesMatrix {
    std::vector<i64> indices;
    bool normalized = false;
    WeightContext weight;
    std::vector<std::vector<Complex>> entries;
    std::vector<std::vector<Real>> tails;
    // per-entry component magnitudes, kept for the 8I + B decomposition report
    std::vector<std::vector<Real>> rank0_part;
    std::vector<std::vector<Real>> rank1_mag;
    std::vector<std::vector<Real>> rank2_mag;

    size_t size() const { return indices.size(); }
};

struct DominanceCertificate {
    bool certified = false;
    std::vector<Real> per_row_margin; // |diag| - sum offdiag magnitudes - row tails
    int worst_row = 0;
};

SeriesMatrix build_matrix(int k, const std::vector<i64>& indices, bool normalized,
                          const TruncationPolicy& pol, const PrecisionContext& ctx,
                          int threads = 0);

DominanceCertificate dominance_certificate(const SeriesMatrix& m);

// Independent validation: complete-pivot elimination on the numeric entries;
// returns false when a pivot collapses to the rounding floor.
bool elimination_nonsingular(const SeriesMatrix& m);

struct MaassResult {
    Real residual;       // |LHS - RHS| of the Maass relation
    Real combined_tails; // sum of certified tails of every coefficient used
    Real largest_term;   // max magnitude among LHS and the divisor terms
};

// A(P_Q, [[m, r/2], [r/2, n]]) vs sum_{d | (m,n,r)} d^{k-1} A(P_Q, [[mn/d^2, r/2d], [r/2d, 1]])
MaassResult maass_residual(int k, const HalfIntegralForm& Q, i64 m, i64 n, i64 r,
                           const TruncationPolicy& pol, const PrecisionContext& ctx,
                           int threads = 0);

struct SymmetryResult {
    Real gap;            // |A(P_T, Q) (det T)^l - A(P_Q, T) (det Q)^l|
    Real combined_tails; // tails scaled by the same factors
    Real scale;          // max magnitude of the two sides
};

SymmetryResult petersson_symmetry_gap(int k, const HalfIntegralForm& Q, const HalfIntegralForm& T,
                                      const TruncationPolicy& pol, const PrecisionContext& ctx,
                                      int threads = 0);

// 8 c_k A(F, Q) / (det Q)^l for a caller-supplied coefficient
Real inner_product_value(int k, const Real& coeff, const HalfIntegralForm& Q,
                         const PrecisionContext& ctx = {});

enum class DecayTarget { qI2, q_squared_diag, I2 };

struct DecayRow {
    int k;
    Real deviation; // |A(P_{pI2}, target) - rank0|
    Real tail;      // certified tail of the coefficient
};

std::vector<DecayRow> decay_experiment(const std::vector<int>& k_list, i64 p, i64 q,
                                       DecayTarget target, const TruncationPolicy& pol,
                                       const PrecisionContext& ctx, int threads = 0);

// Scale-consistent reading of the smallest-eigenvalue inequality:
// lambda_min(C^{-1} tC^{-1}) <= 2 / Tr(C tC), checked exactly in integers.
bool eigen_inequality_check(const Mat2& c);

struct TriangleReport {
    Real diagonal;      // |A(P_{p0 I2}, p0 I2)|
    Real sum_same;      // sum_{p != p0} |A(P_{pI2}, p0 I2)|
    Real sum_mixed;     // sum_p |A(P_{pI2}, diag(p0^2, 1))|
    Real sum_identity;  // sum_p p0^{k-1} |A(P_{pI2}, I2)|
    Real combined_tails;
};

// The three bound sums of the Spezialschar-exclusion display, reported so the
// triangle inequality can be inspected numerically at finite weight.
TriangleReport triangle_report(int k, const std::vector<i64>& primes, i64 p0,
                               const TruncationPolicy& pol, const PrecisionContext& ctx,
                               int threads = 0);

} // namespace siegel

#endif
