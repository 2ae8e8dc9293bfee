#include "siegel/kitaoka.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <tuple>

namespace siegel {

namespace {

mpfr_prec_t work_prec(const WeightContext& w) { return w.precision.bits + 32; }

int norm_threads(int threads) {
    if (threads > 0) return threads;
    return omp_get_max_threads();
}

// first exception thrown inside an omp region, rethrown after the barrier
class ErrorCollector {
public:
    template <typename F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
            std::lock_guard<std::mutex> lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

// (det T / det Q)^{l/2}
Real det_ratio_power(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                     const WeightContext& w, mpfr_prec_t prec) {
    Real ratio(T.disc4(), prec);
    ratio /= Real(Q.disc4(), prec);
    Real half_l = w.l.as_real(prec);
    half_l /= 2L;
    return pow(ratio, half_l);
}

// Y0 = 4 pi sqrt(det T det Q) = pi sqrt(disc4(T) disc4(Q))
Real rank1_bessel_scale(const HalfIntegralForm& Q, const HalfIntegralForm& T, mpfr_prec_t prec) {
    Real y0 = Real::pi(prec);
    y0 *= sqrt(Real(Q.disc4() * T.disc4(), prec));
    return y0;
}

} // namespace

WeightContext WeightContext::make(int k, PrecisionContext ctx) {
    if (k < 6 || k % 2 != 0)
        throw std::invalid_argument("WeightContext: k must be even and >= 6");
    ctx.validate();
    BesselOrder l = BesselOrder::from_weight(k);
    if (k > 30) {
        // rank-1/2 terms mix magnitudes spanning ~ l log l orders
        double lv = l.value();
        mpfr_prec_t need = 64 + static_cast<mpfr_prec_t>(lv * std::log2(lv));
        if (ctx.bits < need) ctx.bits = need;
    }
    mpfr_prec_t p = ctx.bits + 32;
    Real pi = Real::pi(p);
    Real ck = sqrt(pi);
    ck /= 4L;
    ck *= pow_si(pi * 4L, 3 - 2 * k);
    Real a(2 * k - 3, p);
    a /= 2L; // k - 3/2
    ck *= gamma(a);
    ck *= gamma(Real(static_cast<long>(k - 2), p));
    return WeightContext{k, l, ck, ctx};
}

long rank0_term(const HalfIntegralForm& Q, const HalfIntegralForm& T) {
    if (!is_equivalent(Q, T)) return 0;
    return static_cast<long>(automorphisms(T).size());
}

std::map<i64, std::vector<HalfIntegralForm>> primitive_classes(const HalfIntegralForm& f, i64 s_max) {
    std::map<i64, std::vector<HalfIntegralForm>> out;
    double lmin = eigenvalue_bounds(f, 64).first.to_double();
    i64 box = static_cast<i64>(std::sqrt(static_cast<double>(s_max) / lmin)) + 2;
    for (i64 x = -box; x <= box; ++x)
        for (i64 y = -box; y <= box; ++y) {
            if (x == 0 && y == 0) continue;
            if (!(x > 0 || (x == 0 && y > 0))) continue; // classes mod +-1
            if (gcd_ll(x, y) != 1) continue;
            i64 s = f.value_at(x, y);
            if (s > s_max) continue;
            // complete (x, y) to M = [[w1, w2], [x, y]] in SL2(Z), top row
            // reduced to minimize |(w1, w2)|
            i64 u, v;
            ext_gcd(y, x, u, v); // u y + v x = 1
            i64 w1 = u, w2 = -v;
            i64 n2 = x * x + y * y;
            i64 t = static_cast<i64>(std::llround(static_cast<double>(w1 * x + w2 * y) / static_cast<double>(n2)));
            w1 -= t * x;
            w2 -= t * y;
            i64 pa = f.value_at(w1, w2);
            i64 pb = 2 * f.a * w1 * x + f.b * (w1 * y + w2 * x) + 2 * f.c * w2 * y;
            out[s].push_back(HalfIntegralForm{pa, pb, s});
        }
    return out;
}

std::vector<i64> rank1_s_support(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                                 const TruncationPolicy& pol) {
    auto rq = primitive_classes(Q, pol.rank1_s_max);
    auto rt = primitive_classes(T, pol.rank1_s_max);
    std::vector<i64> out;
    for (const auto& [s, v] : rq)
        if (rt.count(s)) out.push_back(s);
    return out;
}

namespace {

struct Rank1Job {
    i64 s;
    const HalfIntegralForm* P;
    const HalfIntegralForm* S;
};

// Envelope tail of the rank-1 sum, using |H| <= c^2, |J_l(y)| <= (1.4 y / l)^l
// and the representation-count bound r(s) <= 2 sqrt(s/lambda_min) + 1.
Real rank1_envelope_tail(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                         const WeightContext& w, const TruncationPolicy& pol,
                         const std::map<i64, std::vector<HalfIntegralForm>>& rq,
                         const std::map<i64, std::vector<HalfIntegralForm>>& rt,
                         mpfr_prec_t p) {
    Real l = w.l.as_real(p);
    Real y0 = rank1_bessel_scale(Q, T, p);
    Real env_base = Real(1.4, p) * y0 / l; // (env_base / (c s))^l bounds |J|
    Real l_minus_32 = l - Real(1.5, p);

    // enumerated s, omitted c > c_max
    Real sum_a(0L, p);
    Real c_factor = pow(Real(static_cast<long>(pol.rank1_c_max), p), Real(1.5, p) - l) / l_minus_32;
    for (const auto& [s, vq] : rq) {
        auto it = rt.find(s);
        if (it == rt.end()) continue;
        long n_pairs = static_cast<long>(vq.size() * it->second.size());
        Real sr(s, p);
        Real term = pow(env_base / sr, l);
        term *= n_pairs;
        term /= sqrt(sr);
        sum_a += term;
    }
    sum_a *= c_factor;

    // omitted s > s_max, all c
    Real gq = sqrt(Real(1L, p) / eigenvalue_bounds(Q, p).first);
    Real gt = sqrt(Real(1L, p) / eigenvalue_bounds(T, p).first);
    Real k1 = (gq * 2L + Real(1L, p)) * (gt * 2L + Real(1L, p));
    Real zeta_bound = Real(1L, p) + Real(1L, p) / l_minus_32;
    Real sum_b = pow(env_base, l);
    sum_b *= k1;
    sum_b *= zeta_bound;
    sum_b *= pow(Real(static_cast<long>(pol.rank1_s_max), p), Real(1.5, p) - l);
    sum_b /= l_minus_32;

    Real tail = sum_a + sum_b;
    tail *= Real::pi(p);
    tail *= sqrt(Real(2L, p));
    tail *= 2L; // both signs
    tail *= 2L; // both signs of the V column
    tail *= det_ratio_power(Q, T, w, p);
    return tail;
}

RankTerm rank1_impl(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                    const WeightContext& w, const TruncationPolicy& pol, int threads) {
    pol.validate();
    const mpfr_prec_t p = work_prec(w);
    const i64 s_max = pol.rank1_s_max;
    const i64 c_max = pol.rank1_c_max;

    auto rq = primitive_classes(Q, s_max);
    auto rt = primitive_classes(T, s_max);

    std::vector<Rank1Job> jobs;
    for (const auto& [s, vq] : rq) {
        auto it = rt.find(s);
        if (it == rt.end()) continue;
        for (const auto& pf : vq)
            for (const auto& sf : it->second)
                jobs.push_back(Rank1Job{s, &pf, &sf});
    }

    // J_l(Y0 / (c s)) depends only on the product c s
    Real y0 = rank1_bessel_scale(Q, T, p);
    std::vector<i64> products;
    for (const auto& job : jobs)
        for (i64 c = 1; c <= c_max; ++c) products.push_back(c * job.s);
    std::sort(products.begin(), products.end());
    products.erase(std::unique(products.begin(), products.end()), products.end());

    PrecisionContext jctx = w.precision;
    jctx.bits = p;
    std::map<i64, Real> jmemo;
    for (i64 cs : products) jmemo.emplace(cs, Real(0L, p));
    ErrorCollector errors;
    #pragma omp parallel for schedule(dynamic) num_threads(norm_threads(threads))
    for (size_t i = 0; i < products.size(); ++i) {
        errors.run([&] {
            Real arg = y0 / Real(products[i], p);
            Real j = bessel_j(w.l, arg, jctx);
            jmemo.find(products[i])->second = std::move(j);
        });
    }
    errors.rethrow();

    std::vector<Complex> results(jobs.size(), Complex(p));
    #pragma omp parallel for schedule(dynamic) num_threads(norm_threads(threads))
    for (size_t i = 0; i < jobs.size(); ++i) {
        errors.run([&] {
            const Rank1Job& job = jobs[i];
            Complex acc(p);
            for (i64 c = 1; c <= c_max; ++c) {
                const Real& j = jmemo.find(c * job.s)->second;
                ExpSumValue hp = h_sum(*job.P, *job.S, c, +1, p);
                ExpSumValue hm = h_sum(*job.P, *job.S, c, -1, p);
                Complex h = hp.value + hm.value;
                Real cr(c, p);
                Real scale = j / (cr * sqrt(cr));
                h.scale(scale);
                acc += h;
            }
            acc.scale(Real(1L, p) / sqrt(Real(job.s, p)));
            results[i] = std::move(acc);
        });
    }
    errors.rethrow();

    Complex sum(p);
    for (const Complex& r : results) sum += r;

    // Indexing convention, fixed by the Maass relation at the Spezialschar
    // weights: U runs over classes of primitive bottom rows mod {+-I2} with
    // det +1 completions, V over both signs of the primitive column (so the
    // paired enumeration above is doubled), and the sign is i^k = (-1)^{k/2}
    // for even k.
    Real factor = sqrt(Real(2L, p));
    factor *= Real::pi(p);
    factor *= 2L;
    if ((w.k / 2) % 2 != 0) factor.negate();
    factor *= det_ratio_power(Q, T, w, p);
    sum.scale(factor);

    RankTerm out{std::move(sum), rank1_envelope_tail(Q, T, w, pol, rq, rt, p), Real(0L, p)};
    return out;
}

// ---- rank 2 ----

struct EigenKey {
    i64 trn, trd, dn, dd;
    friend bool operator<(const EigenKey& a, const EigenKey& b) {
        return std::tie(a.trn, a.trd, a.dn, a.dd) < std::tie(b.trn, b.trd, b.dn, b.dd);
    }
};

EigenKey eigen_key(const HalfIntegralForm& Q, const HalfIntegralForm& T, const Mat2& C) {
    // P = T C^{-1} Q tC^{-1}: tr = Tr(T2 adjC Q2 t(adjC)) / (4 det^2),
    // det = disc4(T) disc4(Q) / (16 det^2); both exact rationals.
    Mat2 adj = C.adjugate();
    Mat2 t2{2 * T.a, T.b, T.b, 2 * T.c};
    Mat2 q2{2 * Q.a, Q.b, Q.b, 2 * Q.c};
    Mat2 prod = t2 * adj * q2 * adj.transpose();
    i64 det2 = C.det() * C.det();
    i64 trn = prod.a + prod.d, trd = 4 * det2;
    i64 g = gcd_ll(trn, trd);
    if (g > 1) { trn /= g; trd /= g; }
    i64 dn = T.disc4() * Q.disc4(), dd = 16 * det2;
    g = gcd_ll(dn, dd);
    if (g > 1) { dn /= g; dd /= g; }
    return EigenKey{trn, trd, dn, dd};
}

// sqrt of the two eigenvalues encoded by an EigenKey
std::pair<Real, Real> eigen_roots(const EigenKey& key, mpfr_prec_t p) {
    Real tr(key.trn, p);
    tr /= Real(key.trd, p);
    Real dt(key.dn, p);
    dt /= Real(key.dd, p);
    Real disc = tr * tr - dt * 4L;
    if (disc.sign() < 0) disc = Real(0L, p); // exact value is >= 0
    Real root = sqrt(disc);
    Real hi = (tr + root) / 2L;
    Real lo = (tr - root) / 2L;
    if (lo.sign() <= 0) lo = dt / hi; // guard against cancellation
    return {sqrt(hi), sqrt(lo)};
}

Real rank2_envelope_tail(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                         const WeightContext& w, const TruncationPolicy& pol, mpfr_prec_t p) {
    Real l = w.l.as_real(p);
    Real pi = Real::pi(p);
    Real lt = eigenvalue_bounds(T, p).second;
    Real lq = eigenvalue_bounds(Q, p).second;
    // kappa = 1.4 * 4 pi sqrt(2 lt lq) / l; per shell r the smallest
    // eigenvalue root is <= sqrt(2 lt lq) / r (Tr(C tC) >= r^2)
    Real kappa = Real(1.4, p) * pi * 4L * sqrt(lt * lq * 2L) / l;
    // S_l = int_0^{pi/2} sin^{l+1} = (sqrt(pi)/2) Gamma(l/2 + 1) / Gamma(l/2 + 3/2)
    Real half_l = l / 2L;
    Real sl = sqrt(pi) / 2L * gamma(half_l + Real(1L, p)) / gamma(half_l + Real(1.5, p));

    Real R(static_cast<long>(pol.rank2_norm_max), p);
    Real four(4L, p), two(2L, p);
    Real shells = pow(R, four - l) / (l - four) * 64L;
    shells += pow(R, two - l) / (l - two) * 16L;
    Real tail = pow(kappa, l);
    tail *= sl;
    tail *= shells;
    tail *= pi * pi * 8L;
    tail *= det_ratio_power(Q, T, w, p);
    return tail;
}

RankTerm rank2_impl(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                    const WeightContext& w, const TruncationPolicy& pol, int threads) {
    pol.validate();
    const mpfr_prec_t p = work_prec(w);
    const int R = pol.rank2_norm_max;

    // canonical representatives of {C, -C}, shells by max-entry then lex
    std::vector<Mat2> cs;
    for (i64 a = -R; a <= R; ++a)
        for (i64 b = -R; b <= R; ++b)
            for (i64 c = -R; c <= R; ++c)
                for (i64 d = -R; d <= R; ++d) {
                    Mat2 m{a, b, c, d};
                    if (m.det() == 0) continue;
                    i64 lead = a != 0 ? a : (b != 0 ? b : (c != 0 ? c : d));
                    if (lead < 0) continue;
                    cs.push_back(m);
                }
    std::sort(cs.begin(), cs.end(), [](const Mat2& x, const Mat2& y) {
        return std::make_tuple(x.max_abs(), x.a, x.b, x.c, x.d) <
               std::make_tuple(y.max_abs(), y.a, y.b, y.c, y.d);
    });

    double tol = w.precision.tail_target / (2.0 * static_cast<double>(cs.size()));
    double floor_tol = std::pow(2.0, -static_cast<double>(w.precision.bits) + 24);
    if (tol < floor_tol) tol = floor_tol;
    PrecisionContext jctx = w.precision;
    jctx.bits = p;
    jctx.tail_target = tol;

    // one quadrature per distinct eigenvalue pair: collect the keys first,
    // evaluate them in a balanced parallel pass, then combine read-only
    std::vector<EigenKey> keys(cs.size());
    #pragma omp parallel for schedule(static) num_threads(norm_threads(threads))
    for (size_t i = 0; i < cs.size(); ++i) keys[i] = eigen_key(Q, T, cs[i]);

    std::map<EigenKey, JJResult> memo;
    for (const EigenKey& k : keys) memo.emplace(k, JJResult());
    std::vector<std::map<EigenKey, JJResult>::iterator> slots;
    slots.reserve(memo.size());
    for (auto it = memo.begin(); it != memo.end(); ++it) slots.push_back(it);
    ErrorCollector errors;
    #pragma omp parallel for schedule(dynamic) num_threads(norm_threads(threads))
    for (size_t i = 0; i < slots.size(); ++i) {
        errors.run([&] {
            auto [hi, lo] = eigen_roots(slots[i]->first, p);
            slots[i]->second = jj_integral(w.l, hi, lo, jctx);
        });
    }
    errors.rethrow();

    std::vector<Complex> results(cs.size(), Complex(p));
    std::vector<Real> errs(cs.size(), Real(0L, p));
    #pragma omp parallel for schedule(dynamic) num_threads(norm_threads(threads))
    for (size_t i = 0; i < cs.size(); ++i) {
        errors.run([&] {
            const Mat2& C = cs[i];
            ExpSumValue kl = symplectic_kloosterman(Q, T, C, p);
            const JJResult& jj = memo.find(keys[i])->second;
            Real den(C.det() < 0 ? -C.det() : C.det(), p);
            den *= sqrt(den); // |det C|^{3/2}
            Real scale = jj.value / den;
            scale *= 2L; // C and -C contribute equally
            Complex v = kl.value;
            v.scale(scale);
            results[i] = std::move(v);
            Real e(kl.terms, p);
            e *= jj.error;
            e /= den;
            e *= 2L;
            errs[i] = std::move(e);
        });
    }
    errors.rethrow();

    Complex sum(p);
    Real qerr(0L, p);
    for (size_t i = 0; i < cs.size(); ++i) {
        sum += results[i];
        qerr += errs[i];
    }
    Real pref = det_ratio_power(Q, T, w, p);
    Real pi = Real::pi(p);
    Real factor = pi * pi * 8L * pref;
    sum.scale(factor);
    qerr *= factor;

    return RankTerm{std::move(sum), rank2_envelope_tail(Q, T, w, pol, p), std::move(qerr)};
}

} // namespace

RankTerm rank1_term(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                    const WeightContext& w, const TruncationPolicy& pol, int threads) {
    return rank1_impl(Q, T, w, pol, threads);
}

RankTerm rank2_term(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                    const WeightContext& w, const TruncationPolicy& pol, int threads) {
    return rank2_impl(Q, T, w, pol, threads);
}

// Plain sequential references: single loops, lazy memoization, accumulation
// in enumeration order.  The parallel kernels stage per-item results and
// reduce in the same order, so both paths must agree bit for bit.

RankTerm rank1_term_serial(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                           const WeightContext& w, const TruncationPolicy& pol) {
    pol.validate();
    const mpfr_prec_t p = work_prec(w);
    auto rq = primitive_classes(Q, pol.rank1_s_max);
    auto rt = primitive_classes(T, pol.rank1_s_max);

    Real y0 = rank1_bessel_scale(Q, T, p);
    PrecisionContext jctx = w.precision;
    jctx.bits = p;
    std::map<i64, Real> jmemo;

    Complex sum(p);
    for (const auto& [s, vq] : rq) {
        auto it = rt.find(s);
        if (it == rt.end()) continue;
        for (const auto& pf : vq)
            for (const auto& sf : it->second) {
                Complex acc(p);
                for (i64 c = 1; c <= pol.rank1_c_max; ++c) {
                    auto jit = jmemo.find(c * s);
                    if (jit == jmemo.end())
                        jit = jmemo.emplace(c * s, bessel_j(w.l, y0 / Real(c * s, p), jctx)).first;
                    ExpSumValue hp = h_sum(pf, sf, c, +1, p);
                    ExpSumValue hm = h_sum(pf, sf, c, -1, p);
                    Complex h = hp.value + hm.value;
                    Real cr(c, p);
                    Real scale = jit->second / (cr * sqrt(cr));
                    h.scale(scale);
                    acc += h;
                }
                acc.scale(Real(1L, p) / sqrt(Real(s, p)));
                sum += acc;
            }
    }

    Real factor = sqrt(Real(2L, p));
    factor *= Real::pi(p);
    factor *= 2L;
    if ((w.k / 2) % 2 != 0) factor.negate();
    factor *= det_ratio_power(Q, T, w, p);
    sum.scale(factor);
    return RankTerm{std::move(sum), rank1_envelope_tail(Q, T, w, pol, rq, rt, p), Real(0L, p)};
}

RankTerm rank2_term_serial(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                           const WeightContext& w, const TruncationPolicy& pol) {
    pol.validate();
    const mpfr_prec_t p = work_prec(w);
    const int R = pol.rank2_norm_max;

    std::vector<Mat2> cs;
    for (i64 a = -R; a <= R; ++a)
        for (i64 b = -R; b <= R; ++b)
            for (i64 c = -R; c <= R; ++c)
                for (i64 d = -R; d <= R; ++d) {
                    Mat2 m{a, b, c, d};
                    if (m.det() == 0) continue;
                    i64 lead = a != 0 ? a : (b != 0 ? b : (c != 0 ? c : d));
                    if (lead < 0) continue;
                    cs.push_back(m);
                }
    std::sort(cs.begin(), cs.end(), [](const Mat2& x, const Mat2& y) {
        return std::make_tuple(x.max_abs(), x.a, x.b, x.c, x.d) <
               std::make_tuple(y.max_abs(), y.a, y.b, y.c, y.d);
    });

    double tol = w.precision.tail_target / (2.0 * static_cast<double>(cs.size()));
    double floor_tol = std::pow(2.0, -static_cast<double>(w.precision.bits) + 24);
    if (tol < floor_tol) tol = floor_tol;
    PrecisionContext jctx = w.precision;
    jctx.bits = p;
    jctx.tail_target = tol;

    std::map<EigenKey, JJResult> memo;
    Complex sum(p);
    Real qerr(0L, p);
    for (const Mat2& C : cs) {
        EigenKey key = eigen_key(Q, T, C);
        auto it = memo.find(key);
        if (it == memo.end()) {
            auto [hi, lo] = eigen_roots(key, p);
            it = memo.emplace(key, jj_integral(w.l, hi, lo, jctx)).first;
        }
        ExpSumValue kl = symplectic_kloosterman(Q, T, C, p);
        Real den(C.det() < 0 ? -C.det() : C.det(), p);
        den *= sqrt(den);
        Real scale = it->second.value / den;
        scale *= 2L;
        Complex v = kl.value;
        v.scale(scale);
        sum += v;
        Real e(kl.terms, p);
        e *= it->second.error;
        e /= den;
        e *= 2L;
        qerr += e;
    }
    Real pref = det_ratio_power(Q, T, w, p);
    Real pi = Real::pi(p);
    Real factor = pi * pi * 8L * pref;
    sum.scale(factor);
    qerr *= factor;
    return RankTerm{std::move(sum), rank2_envelope_tail(Q, T, w, pol, p), std::move(qerr)};
}

CoefficientBreakdown fourier_coefficient(const HalfIntegralForm& Q, const HalfIntegralForm& T,
                                         const WeightContext& w, const TruncationPolicy& pol,
                                         int threads) {
    pol.validate();
    const mpfr_prec_t p = work_prec(w);

    TruncationPolicy eff = pol.tail_mode == TailMode::doubling ? pol.doubled() : pol;
    RankTerm r1 = rank1_term(Q, T, w, eff, threads);
    RankTerm r2 = rank2_term(Q, T, w, eff, threads);
    long r0 = rank0_term(Q, T);

    Complex total = r1.value + r2.value;
    total.re += Real(r0, p);

    Real tail(0L, p);
    if (pol.tail_mode == TailMode::envelope) {
        tail = r1.tail + r2.tail + r2.quad_error;
    } else {
        // empirical: distance between the base and doubled-radius totals
        RankTerm b1 = rank1_term(Q, T, w, pol, threads);
        RankTerm b2 = rank2_term(Q, T, w, pol, threads);
        Complex base = b1.value + b2.value;
        base.re += Real(r0, p);
        tail = (total - base).abs() + r2.quad_error;
    }

    CoefficientBreakdown out{
        Real(r0, p), r1.value, r2.value, total,
        tail, r1.tail, r2.tail, r2.quad_error,
        pol, w};
    if (pol.requested_tail > 0.0 && tail > Real(pol.requested_tail, p))
        throw TruncationTargetError("fourier_coefficient: certified tail exceeds requested target (achieved " +
                                        tail.str(6) + ")",
                                    tail.to_double());
    return out;
}

} // namespace siegel
