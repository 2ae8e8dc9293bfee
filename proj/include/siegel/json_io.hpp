#ifndef SIEGEL_JSON_IO_HPP
#define SIEGEL_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "siegel/analysis.hpp"

namespace siegel {

using ordered_json = nlohmann::ordered_json;

// Forms parse as the exact triple "a,b,c" with b twice the off-diagonal.
HalfIntegralForm form_from_string(const std::string& s);
Mat2 mat2_from_string(const std::string& s); // "c11,c12,c21,c22"

int output_digits(mpfr_prec_t bits);

ordered_json form_to_json(const HalfIntegralForm& f);
ordered_json complex_to_json(const Complex& z, int digits);
ordered_json expsum_to_json(const ExpSumValue& v, int digits);
ordered_json policy_to_json(const TruncationPolicy& pol);
ordered_json breakdown_to_json(const CoefficientBreakdown& cb);
ordered_json matrix_to_json(const SeriesMatrix& m);
ordered_json certificate_to_json(const DominanceCertificate& c, int digits);
std::string matrix_to_csv(const SeriesMatrix& m);

} // namespace siegel

#endif
