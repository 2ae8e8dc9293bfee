#ifndef SIEGEL_KLOOSTERMAN_HPP
#define SIEGEL_KLOOSTERMAN_HPP

#include <utility>
#include <vector>

#include "siegel/forms.hpp"
#include "siegel/intmat.hpp"
#include "siegel/real.hpp"

namespace siegel {

// Representative (A, D) of a double coset of Gamma_inf \ Sp4(Z) / Gamma_inf
// with fixed lower-left block C.  A is determined modulo {X C}, D modulo
// {C X}, X symmetric integral.
struct CosetRep {
    Mat2 A, D;
};

struct ExpSumValue {
    Complex value;
    long terms = 0;
};

// True iff some integral B completes [[A, B], [C, D]] to a symplectic matrix;
// on success *b_out receives that B (it is unique for det C != 0).
bool validate_coset_rep(const Mat2& C, const Mat2& A, const Mat2& D, Mat2* b_out = nullptr);

// A system X(C) of double-coset representatives for the given invertible C,
// in the original coordinates.  |X(C)| <= |det C|^{3/2}.
std::vector<CosetRep> enumerate_coset_reps(const Mat2& C);

// K(Q, T; C) = sum over X(C) of e(Tr(A C^{-1} Q + C^{-1} D T)).
ExpSumValue symplectic_kloosterman(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                                   const Mat2& C, mpfr_prec_t prec = 128);

// Exact rational phase (num, den), reduced with den > 0, of one summand of
// K(Q, T; C): Tr(A C^{-1} Q + C^{-1} D T) mod 1.
std::pair<i64, i64> rep_phase(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                              const Mat2& C, const CosetRep& rep);

// H^{+-}(P, S; c), the rank-1 exponential sum.  sign = +1 selects the upper
// sign of the definition.  Zero whenever p4 != s4.
ExpSumValue h_sum(const HalfIntegralForm& P, const HalfIntegralForm& S,
                  i64 c, int sign, mpfr_prec_t prec = 128);

} // namespace siegel

#endif
