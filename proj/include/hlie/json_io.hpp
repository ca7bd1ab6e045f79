#pragma once

// JSON formats:
//   algebra   {"dim": n, "field": "rational"|"float",
//              "brackets": [{"i": 1, "j": 2, "terms": [{"k": 4, "value": "3/7"}]}]}
//   metric    {"gram": [[...], ...]}
//   operator  {"matrix": [[...], ...]}
// Indices are 1-based. Rational scalars are strings "p/q" (JSON integers are
// also accepted); float scalars are JSON numbers.

#include "hlie/lie_algebra.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace hlie {

/// Malformed or inconsistent input document.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;
using AnyAlgebra = std::variant<LieAlgebra<Rational>, LieAlgebra<double>>;

AnyAlgebra parse_algebra(const json& doc);

template <Field T>
Matrix<T> parse_matrix(const json& rows, std::size_t dim, const char* what);

template <Field T>
T parse_scalar(const json& value);
template <>
Rational parse_scalar<Rational>(const json& value);
template <>
double parse_scalar<double>(const json& value);

template <Field T>
json scalar_to_json(const T& x);
template <>
json scalar_to_json<Rational>(const Rational& x);
template <>
json scalar_to_json<double>(const double& x);

template <Field T>
json algebra_to_json(const LieAlgebra<T>& alg);

template <Field T>
json matrix_to_json(const Matrix<T>& m);

template <Field T>
json vector_to_json(const Vector<T>& v);

/// Reads and parses a file; throws InputError on I/O or syntax errors.
json read_json_file(const std::string& path, std::string* raw = nullptr);

/// 64-bit FNV-1a digest as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace hlie
