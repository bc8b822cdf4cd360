#include "zpole/io.hpp"

#include <cctype>
#include <cstdlib>

namespace zpole::io {

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMat& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = 0; k < m.cols(); ++k) out.push_back(to_json(m(i, k)));
  }
  return out;
}

json vector_json(const CVec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

cplx complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_string()) return parse_complex(j.get<std::string>());
  throw Error(ErrorCode::InputError, "expected complex [re, im], got " + j.dump());
}

CVec vector_from(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InputError, "expected list of complex values");
  CVec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = complex_from(j[i]);
  return v;
}

CMat matrix_from(const json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols) {
    throw Error(ErrorCode::InputError, "expected " + std::to_string(rows * cols) +
                                           " row-major complex entries");
  }
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from(j[i * cols + k]);
  }
  return m;
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::InputError, "empty complex literal");
  const char* begin = s.c_str();
  char* end = nullptr;
  auto fail = [&] { throw Error(ErrorCode::InputError, "bad complex literal '" + text + "'"); };
  const bool imag_only = s.back() == 'i' || s.back() == 'j';
  if (!imag_only) {
    const double re = std::strtod(begin, &end);
    if (end != begin + s.size()) fail();
    return {re, 0.0};
  }
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not an exponent sign
  size_t split = std::string::npos;
  for (size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto number = [&](const std::string& part, double fallback_sign) {
    if (part.empty() || part == "+") return fallback_sign;
    if (part == "-") return -fallback_sign;
    const char* b = part.c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (e != b + part.size()) fail();
    return v;
  };
  if (split == std::string::npos) return {0.0, number(body, 1.0)};
  const double re = number(body.substr(0, split), 0.0);
  const double im = number(body.substr(split), 1.0);
  return {re, im};
}

}  // namespace zpole::io
