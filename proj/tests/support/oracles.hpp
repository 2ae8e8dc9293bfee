#ifndef SIEGEL_TEST_ORACLES_HPP
#define SIEGEL_TEST_ORACLES_HPP

#include <vector>

#include "siegel/kloosterman.hpp"

namespace siegel::oracle {

// Provably complete brute-force enumeration of X(C): D runs over the full
// entry box [-|C|-1, |C|+1]^4 (every class has a representative there),
// classes are keyed by the exact fractional part of C^{-1} D, and A is found
// by box search validated through an explicit integral completion B.
std::vector<CosetRep> coset_reps(const Mat2& c);

// Independent evaluation of K(Q, T; C) from a list of representatives.
Complex kloosterman_sum(const HalfIntegralForm& q, const HalfIntegralForm& t,
                        const Mat2& c, const std::vector<CosetRep>& reps, mpfr_prec_t prec);

// Exact summand phases (num/den reduced, den > 0), sorted, for multiset comparison.
std::vector<std::pair<i64, i64>> phase_multiset(const HalfIntegralForm& q, const HalfIntegralForm& t,
                                                const Mat2& c, const std::vector<CosetRep>& reps);

// J_l for half-integer l from the closed forms J_{1/2}, J_{3/2} by upward
// recurrence at raised precision (test oracle only; unstable upward use is
// compensated with extra bits).
Real bessel_closed_form(long two_l, const Real& x, mpfr_prec_t prec);

// Literal term-by-term H^{+-}(P, S; c): every term evaluated as a single
// exact rational phase with denominator 2 c s4, no factoring of the constant.
Complex h_sum_literal(const HalfIntegralForm& p, const HalfIntegralForm& s,
                      i64 c, int sign, mpfr_prec_t prec);

} // namespace siegel::oracle

#endif
