#include "siegel/json_io.hpp"

#include <sstream>

namespace siegel {

namespace {
std::vector<i64> parse_ints(const std::string& s, size_t expected, const char* what) {
    std::vector<i64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        i64 v = 0;
        try {
            v = std::stoll(tok, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": malformed integer '" + tok + "'");
        }
        if (pos != tok.size())
            throw std::invalid_argument(std::string(what) + ": malformed integer '" + tok + "'");
        out.push_back(v);
    }
    if (out.size() != expected)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                    " comma-separated integers");
    return out;
}
} // namespace

HalfIntegralForm form_from_string(const std::string& s) {
    auto v = parse_ints(s, 3, "form");
    return HalfIntegralForm{v[0], v[1], v[2]};
}

Mat2 mat2_from_string(const std::string& s) {
    auto v = parse_ints(s, 4, "matrix");
    return Mat2{v[0], v[1], v[2], v[3]};
}

int output_digits(mpfr_prec_t bits) {
    return static_cast<int>(static_cast<double>(bits) * 0.30103) + 1;
}

ordered_json form_to_json(const HalfIntegralForm& f) {
    return ordered_json{{"a", f.a}, {"b", f.b}, {"c", f.c}};
}

ordered_json complex_to_json(const Complex& z, int digits) {
    return ordered_json{{"re", z.re.str(digits)}, {"im", z.im.str(digits)}};
}

ordered_json expsum_to_json(const ExpSumValue& v, int digits) {
    return ordered_json{{"re", v.value.re.str(digits)}, {"im", v.value.im.str(digits)}, {"terms", v.terms}};
}

ordered_json policy_to_json(const TruncationPolicy& pol) {
    ordered_json j{
        {"rank1_c_max", pol.rank1_c_max},
        {"rank1_s_max", pol.rank1_s_max},
        {"rank2_norm_max", pol.rank2_norm_max},
        {"tail_mode", pol.tail_mode == TailMode::envelope ? "envelope" : "doubling"}};
    if (pol.requested_tail > 0.0) j["requested_tail"] = pol.requested_tail;
    return j;
}

ordered_json breakdown_to_json(const CoefficientBreakdown& cb) {
    int digits = output_digits(cb.weight.precision.bits);
    return ordered_json{
        {"k", cb.weight.k},
        {"two_l", cb.weight.l.two_l},
        {"rank0", cb.rank0.str(digits)},
        {"rank1", complex_to_json(cb.rank1, digits)},
        {"rank2", complex_to_json(cb.rank2, digits)},
        {"total", complex_to_json(cb.total, digits)},
        {"tail_bound", cb.tail_bound.str(digits)},
        {"tails",
         ordered_json{{"rank1_envelope", cb.rank1_tail.str(digits)},
                      {"rank2_envelope", cb.rank2_tail.str(digits)},
                      {"quadrature", cb.quad_error.str(digits)}}},
        {"policy", policy_to_json(cb.policy)},
        {"precision_bits", static_cast<long>(cb.weight.precision.bits)}};
}

ordered_json matrix_to_json(const SeriesMatrix& m) {
    int digits = output_digits(m.weight.precision.bits);
    ordered_json entries = ordered_json::array();
    ordered_json tails = ordered_json::array();
    for (size_t i = 0; i < m.size(); ++i) {
        ordered_json row = ordered_json::array();
        ordered_json trow = ordered_json::array();
        for (size_t j = 0; j < m.size(); ++j) {
            row.push_back(complex_to_json(m.entries[i][j], digits));
            trow.push_back(m.tails[i][j].str(digits));
        }
        entries.push_back(row);
        tails.push_back(trow);
    }
    return ordered_json{
        {"k", m.weight.k},
        {"indices", m.indices},
        {"normalized", m.normalized},
        {"entries", entries},
        {"tails", tails},
        {"precision_bits", static_cast<long>(m.weight.precision.bits)}};
}

ordered_json certificate_to_json(const DominanceCertificate& c, int digits) {
    ordered_json margins = ordered_json::array();
    for (const Real& r : c.per_row_margin) margins.push_back(r.str(digits));
    return ordered_json{
        {"certified", c.certified},
        {"per_row_margin", margins},
        {"worst_row", c.worst_row}};
}

std::string matrix_to_csv(const SeriesMatrix& m) {
    int digits = output_digits(m.weight.precision.bits);
    std::ostringstream os;
    os << "index";
    for (i64 n : m.indices) os << "," << n;
    os << "\n";
    for (size_t i = 0; i < m.size(); ++i) {
        os << m.indices[i];
        for (size_t j = 0; j < m.size(); ++j) os << "," << m.entries[i][j].re.str(digits);
        os << "\n";
    }
    return os.str();
}

} // namespace siegel
