#pragma once

// Scalar fields used throughout the library: exact GMP rationals and IEEE
// doubles. Every algorithm is written once against the Field concept.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>

namespace hlie {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class T>
concept Field = std::same_as<T, double> || std::same_as<T, Rational>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

enum class FieldKind { rational, floating };

template <Field T>
constexpr FieldKind field_kind() {
  return is_exact_v<T> ? FieldKind::rational : FieldKind::floating;
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <Field T>
T abs_of(const T& x) {
  if constexpr (is_exact_v<T>) {
    return boost::multiprecision::abs(x);
  } else {
    return std::fabs(x);
  }
}

/// Zero test: exact equality for rationals, |x| <= tol for doubles.
template <Field T>
bool is_zero(const T& x, double tol) {
  if constexpr (is_exact_v<T>) {
    return x == 0;
  } else {
    return std::fabs(x) <= tol;
  }
}

/// Parses "p/q" or "p" (optional sign). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is one.
std::string format_rational(const Rational& x);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

inline std::string format_scalar(const Rational& x) { return format_rational(x); }
inline std::string format_scalar(double x) { return format_double(x); }

}  // namespace hlie
