#pragma once

// JSON encodings. Complex numbers are [re, im] pairs; elements are
// {"scalar": c}, {"matrix": rows of c} or {"modes": [[k, c], ...]}.

#include <json.hpp>

#include "nclc/connection.hpp"
#include "nclc/forms.hpp"
#include "nclc/metric.hpp"

namespace nclc {

using Json = nlohmann::ordered_json;

Json encode_complex(cplx c);
cplx decode_complex(const Json& j);

Json encode_element(const AlgebraElement& a);
AlgebraElement decode_element(const Json& j, const Backend& b);

Json encode_backend(const Backend& b);
Backend decode_backend(const Json& j);

Json encode_calculus(const CalculusSpec& spec);
CalculusSpec decode_calculus(const Json& j);

Json encode_metric(const MetricSpec& g);
MetricSpec decode_metric(const Json& j, const CalculusSpec& spec);

// n x n x n nested array, gamma[i][j][k] = Gamma^i_jk.
Json encode_gamma(const ConnectionCoeffs& c);

}  // namespace nclc
