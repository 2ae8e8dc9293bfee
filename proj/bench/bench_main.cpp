// Timings of the parallel kernels against their serial references.
//
//   siegel_bench [threads] [norm_max]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "siegel/kitaoka.hpp"

using namespace siegel;

namespace {
template <typename F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}
} // namespace

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
    int norm_max = argc > 2 ? std::atoi(argv[2]) : 4;

    WeightContext w = WeightContext::make(10);
    TruncationPolicy pol;
    pol.rank1_c_max = 32;
    pol.rank1_s_max = 32;
    pol.rank2_norm_max = norm_max;

    HalfIntegralForm q = HalfIntegralForm::scalar(1);
    HalfIntegralForm t = HalfIntegralForm::scalar(2);

    std::printf("kernel            serial(ms)  parallel(ms)  threads  speedup  match\n");

    RankTerm r1s, r1p, r2s, r2p;
    double t1s = time_ms([&] { r1s = rank1_term_serial(q, t, w, pol); });
    double t1p = time_ms([&] { r1p = rank1_term(q, t, w, pol, threads); });
    bool m1 = (r1s.value.re == r1p.value.re) && (r1s.value.im == r1p.value.im);
    std::printf("rank1_term        %10.1f  %12.1f  %7d  %7.2f  %s\n", t1s, t1p, threads, t1s / t1p,
                m1 ? "bit-exact" : "MISMATCH");

    double t2s = time_ms([&] { r2s = rank2_term_serial(q, t, w, pol); });
    double t2p = time_ms([&] { r2p = rank2_term(q, t, w, pol, threads); });
    bool m2 = (r2s.value.re == r2p.value.re) && (r2s.value.im == r2p.value.im);
    std::printf("rank2_term        %10.1f  %12.1f  %7d  %7.2f  %s\n", t2s, t2p, threads, t2s / t2p,
                m2 ? "bit-exact" : "MISMATCH");

    return (m1 && m2) ? 0 : 1;
}
