#pragma once

#include <nlohmann/json.hpp>

#include "zpole/common.hpp"

namespace zpole::io {

using nlohmann::json;

json to_json(cplx z);
json to_json(const CMat& m);  // row-major list of [re, im]
json vector_json(const CVec& v);

// Accepts [re, im] or a bare number.
cplx complex_from(const json& j);
CVec vector_from(const json& j);
// Row-major list of complex pairs of known dimensions.
CMat matrix_from(const json& j, int rows, int cols);
// Parses "a+bi", "bi", "a" (also 'j').
cplx parse_complex(const std::string& text);

}  // namespace zpole::io
