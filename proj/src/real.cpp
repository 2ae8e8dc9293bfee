#include "siegel/real.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace siegel {

std::string Real::str(int digits) const {
    if (digits <= 0) digits = static_cast<int>(static_cast<double>(prec()) * 0.30103) + 1;
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

namespace {
std::mutex root_mutex;
std::map<std::pair<long long, mpfr_prec_t>, std::shared_ptr<const UnitTable>> root_cache;
} // namespace

std::shared_ptr<const UnitTable> unit_table(long long den, mpfr_prec_t prec) {
    {
        std::lock_guard<std::mutex> lock(root_mutex);
        auto it = root_cache.find({den, prec});
        if (it != root_cache.end()) return it->second;
    }
    auto tab = std::make_shared<UnitTable>();
    tab->cs.reserve(den);
    tab->sn.reserve(den);
    Real two_pi = Real::pi(prec);
    two_pi *= 2L;
    for (long long j = 0; j < den; ++j) {
        Real ang = two_pi;
        ang *= static_cast<long>(j);
        ang /= static_cast<long>(den);
        Real c(prec), s(prec);
        mpfr_sin_cos(s.raw(), c.raw(), ang.raw(), MPFR_RNDN);
        tab->cs.push_back(std::move(c));
        tab->sn.push_back(std::move(s));
    }
    std::lock_guard<std::mutex> lock(root_mutex);
    auto [it, inserted] = root_cache.try_emplace({den, prec}, tab);
    return it->second;
}

std::pair<Real, Real> unit_phase(long long num, long long den, mpfr_prec_t prec) {
    if (den < 0) { den = -den; num = -num; }
    num %= den;
    if (num < 0) num += den;
    long long g = std::gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
    if (den <= 4096) {
        auto tab = unit_table(den, prec);
        return {tab->cs[num], tab->sn[num]};
    }
    Real ang = Real::pi(prec);
    ang *= 2L;
    ang *= static_cast<long>(num);
    ang /= static_cast<long>(den);
    Real c(prec), s(prec);
    mpfr_sin_cos(s.raw(), c.raw(), ang.raw(), MPFR_RNDN);
    return {c, s};
}

} // namespace siegel
