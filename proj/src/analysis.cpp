#include "siegel/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace siegel {

SeriesMatrix build_matrix(int k, const std::vector<i64>& indices, bool normalized,
                          const TruncationPolicy& pol, const PrecisionContext& ctx,
                          int threads) {
    if (indices.empty()) throw std::invalid_argument("build_matrix: empty index set");
    {
        std::vector<i64> sorted = indices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("build_matrix: indices must be distinct");
        if (sorted.front() < 1) throw std::invalid_argument("build_matrix: indices must be positive");
    }
    WeightContext w = WeightContext::make(k, ctx);
    const mpfr_prec_t p = w.precision.bits + 32;
    const size_t n = indices.size();

    SeriesMatrix m{indices, normalized, w, {}, {}, {}, {}, {}};
    m.entries.assign(n, std::vector<Complex>(n, Complex(p)));
    m.tails.assign(n, std::vector<Real>(n, Real(p)));
    m.rank0_part.assign(n, std::vector<Real>(n, Real(p)));
    m.rank1_mag.assign(n, std::vector<Real>(n, Real(p)));
    m.rank2_mag.assign(n, std::vector<Real>(n, Real(p)));

    Real l = w.l.as_real(p);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            HalfIntegralForm qm = HalfIntegralForm::scalar(indices[i]);
            HalfIntegralForm tn = HalfIntegralForm::scalar(indices[j]);
            CoefficientBreakdown cb = [&] {
                try {
                    return fourier_coefficient(qm, tn, w, pol, threads);
                } catch (const std::exception& e) {
                    throw std::runtime_error("build_matrix: entry (" + std::to_string(indices[i]) + "," +
                                             std::to_string(indices[j]) + ") failed: " + e.what());
                }
            }();
            Complex entry = cb.total;
            Real tail = cb.tail_bound;
            if (normalized) {
                // (det mI2 / det nI2)^{l/2} = (m/n)^l
                Real scale = pow(Real(indices[i], p) / Real(indices[j], p), l);
                entry.scale(scale);
                tail *= scale;
            }
            m.entries[i][j] = std::move(entry);
            m.tails[i][j] = std::move(tail);
            m.rank0_part[i][j] = cb.rank0;
            m.rank1_mag[i][j] = cb.rank1.abs();
            m.rank2_mag[i][j] = cb.rank2.abs();
        }
    }
    return m;
}

DominanceCertificate dominance_certificate(const SeriesMatrix& m) {
    const size_t n = m.size();
    if (m.entries.size() != n) throw std::invalid_argument("dominance_certificate: matrix not square");
    DominanceCertificate cert;
    cert.certified = true;
    mpfr_prec_t p = m.entries[0][0].re.prec();
    for (size_t i = 0; i < n; ++i) {
        Real margin = m.entries[i][i].abs();
        for (size_t j = 0; j < n; ++j) {
            if (j != i) margin -= m.entries[i][j].abs();
            margin -= m.tails[i][j];
        }
        cert.per_row_margin.push_back(margin);
        if (margin <= Real(0L, p)) cert.certified = false;
    }
    cert.worst_row = 0;
    for (size_t i = 1; i < n; ++i)
        if (cert.per_row_margin[i] < cert.per_row_margin[cert.worst_row])
            cert.worst_row = static_cast<int>(i);
    return cert;
}

bool elimination_nonsingular(const SeriesMatrix& m) {
    const size_t n = m.size();
    mpfr_prec_t p = m.entries[0][0].re.prec();
    std::vector<std::vector<Complex>> a = m.entries;

    Real scale(0L, p);
    for (const auto& row : a)
        for (const auto& e : row) scale = max(scale, e.abs());
    if (scale.is_zero()) return false;
    Real floor = scale * Real::pow2(-static_cast<long>(p) + 40, p);

    std::vector<size_t> cols(n);
    for (size_t i = 0; i < n; ++i) cols[i] = i;

    for (size_t step = 0; step < n; ++step) {
        // complete pivoting
        size_t pr = step, pc = step;
        Real best(0L, p);
        for (size_t i = step; i < n; ++i)
            for (size_t j = step; j < n; ++j) {
                Real v = a[i][cols[j]].abs();
                if (v > best) { best = v; pr = i; pc = j; }
            }
        if (best <= floor) return false;
        std::swap(a[step], a[pr]);
        std::swap(cols[step], cols[pc]);
        Complex pivot = a[step][cols[step]];
        Real pn = pivot.re * pivot.re + pivot.im * pivot.im;
        for (size_t i = step + 1; i < n; ++i) {
            Complex num = a[i][cols[step]] * pivot.conj();
            Complex factor(num.re / pn, num.im / pn);
            for (size_t j = step; j < n; ++j)
                a[i][cols[j]] -= factor * a[step][cols[j]];
        }
    }
    return true;
}

MaassResult maass_residual(int k, const HalfIntegralForm& Q, i64 m, i64 n, i64 r,
                           const TruncationPolicy& pol, const PrecisionContext& ctx,
                           int threads) {
    WeightContext w = WeightContext::make(k, ctx);
    const mpfr_prec_t p = w.precision.bits + 32;

    HalfIntegralForm lhs_form{m, r, n}; // [[m, r/2], [r/2, n]]; ctor rejects non-PD
    CoefficientBreakdown lhs = fourier_coefficient(Q, lhs_form, w, pol, threads);

    i64 g = gcd_ll(m, gcd_ll(n, r));
    Complex rhs(p);
    Real tails = lhs.tail_bound;
    Real largest = lhs.total.abs();
    for (i64 d = 1; d <= g; ++d) {
        if (g % d != 0) continue;
        HalfIntegralForm target{(m * n) / (d * d), r / d, 1};
        CoefficientBreakdown cb = fourier_coefficient(Q, target, w, pol, threads);
        Real dk = pow_si(Real(d, p), k - 1);
        Complex term = cb.total;
        term.scale(dk);
        rhs += term;
        tails += cb.tail_bound * dk;
        largest = max(largest, term.abs());
    }
    Real residual = (lhs.total - rhs).abs();
    return MaassResult{residual, tails, largest};
}

SymmetryResult petersson_symmetry_gap(int k, const HalfIntegralForm& Q, const HalfIntegralForm& T,
                                      const TruncationPolicy& pol, const PrecisionContext& ctx,
                                      int threads) {
    WeightContext w = WeightContext::make(k, ctx);
    const mpfr_prec_t p = w.precision.bits + 32;
    Real l = w.l.as_real(p);

    CoefficientBreakdown a_tq = fourier_coefficient(T, Q, w, pol, threads); // A(P_T, Q)
    CoefficientBreakdown a_qt = fourier_coefficient(Q, T, w, pol, threads); // A(P_Q, T)

    Real det_t = T.det(p), det_q = Q.det(p);
    Real ft = pow(det_t, l), fq = pow(det_q, l);
    Complex left = a_tq.total;
    left.scale(ft);
    Complex right = a_qt.total;
    right.scale(fq);

    SymmetryResult out{
        (left - right).abs(),
        a_tq.tail_bound * ft + a_qt.tail_bound * fq,
        max(left.abs(), right.abs())};
    return out;
}

Real inner_product_value(int k, const Real& coeff, const HalfIntegralForm& Q,
                         const PrecisionContext& ctx) {
    WeightContext w = WeightContext::make(k, ctx);
    const mpfr_prec_t p = w.precision.bits + 32;
    Real v = to_prec(coeff, p);
    v *= w.c_k;
    v *= 8L;
    v /= pow(Q.det(p), w.l.as_real(p));
    return v;
}

std::vector<DecayRow> decay_experiment(const std::vector<int>& k_list, i64 p, i64 q,
                                       DecayTarget target, const TruncationPolicy& pol,
                                       const PrecisionContext& ctx, int threads) {
    for (size_t i = 1; i < k_list.size(); ++i)
        if (k_list[i] <= k_list[i - 1])
            throw std::invalid_argument("decay_experiment: k_list must be increasing");
    std::vector<DecayRow> rows;
    for (int k : k_list) {
        WeightContext w = WeightContext::make(k, ctx);
        HalfIntegralForm qf = HalfIntegralForm::scalar(p);
        HalfIntegralForm tf = target == DecayTarget::qI2          ? HalfIntegralForm::scalar(q)
                              : target == DecayTarget::q_squared_diag ? HalfIntegralForm::diag(q * q, 1)
                                                                      : HalfIntegralForm::scalar(1);
        CoefficientBreakdown cb = fourier_coefficient(qf, tf, w, pol, threads);
        Complex dev = cb.total;
        dev.re -= cb.rank0;
        rows.push_back(DecayRow{k, dev.abs(), cb.tail_bound});
    }
    return rows;
}

bool eigen_inequality_check(const Mat2& c) {
    i64 det = c.det();
    if (det == 0) throw std::invalid_argument("eigen_inequality_check: singular C");
    // lambda_min(C^{-1} tC^{-1}) = 1 / lambda_max(C tC) and
    // lambda_max(C tC) = (t + sqrt(t^2 - 4 det^2)) / 2 with t = Tr(C tC), so
    // lambda_min <= 2/t  <=>  t <= 2 lambda_max  <=>  t^2 >= 4 det^2.
    i64 t = c.frob2();
    return t * t >= 4 * det * det;
}

TriangleReport triangle_report(int k, const std::vector<i64>& primes, i64 p0,
                               const TruncationPolicy& pol, const PrecisionContext& ctx,
                               int threads) {
    WeightContext w = WeightContext::make(k, ctx);
    const mpfr_prec_t p = w.precision.bits + 32;
    TriangleReport rep{Real(0L, p), Real(0L, p), Real(0L, p), Real(0L, p), Real(0L, p)};

    HalfIntegralForm p0i2 = HalfIntegralForm::scalar(p0);
    HalfIntegralForm mixed = HalfIntegralForm::diag(p0 * p0, 1);
    HalfIntegralForm i2 = HalfIntegralForm::scalar(1);
    Real p0k = pow_si(Real(p0, p), k - 1);

    for (i64 pr : primes) {
        HalfIntegralForm pim = HalfIntegralForm::scalar(pr);
        CoefficientBreakdown same = fourier_coefficient(pim, p0i2, w, pol, threads);
        if (pr == p0)
            rep.diagonal = same.total.abs();
        else
            rep.sum_same += same.total.abs();
        rep.combined_tails += same.tail_bound;

        CoefficientBreakdown mx = fourier_coefficient(pim, mixed, w, pol, threads);
        rep.sum_mixed += mx.total.abs();
        rep.combined_tails += mx.tail_bound;

        CoefficientBreakdown id = fourier_coefficient(pim, i2, w, pol, threads);
        rep.sum_identity += id.total.abs() * p0k;
        rep.combined_tails += id.tail_bound * p0k;
    }
    return rep;
}

} // namespace siegel
