#include "hlie/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hlie {

namespace {

std::size_t parse_index(const json& v, std::size_t dim, const char* name) {
  if (!v.is_number_integer()) throw InputError(std::string("'") + name + "' must be an integer");
  const long long x = v.get<long long>();
  if (x < 1 || static_cast<std::size_t>(x) > dim)
    throw InputError(std::string("'") + name + "' = " + std::to_string(x) + " is outside 1.." + std::to_string(dim));
  return static_cast<std::size_t>(x - 1);
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

template <Field T>
LieAlgebra<T> parse_brackets(const json& doc, std::size_t dim) {
  std::vector<BracketTerm<T>> terms;
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  const json& brackets = doc.contains("brackets") ? doc.at("brackets") : json::array();
  if (!brackets.is_array()) throw InputError("'brackets' must be an array");
  for (const auto& entry : brackets) {
    const std::size_t i = parse_index(member(entry, "i"), dim, "i");
    const std::size_t j = parse_index(member(entry, "j"), dim, "j");
    if (i >= j)
      throw InputError("bracket entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") must have i < j");
    if (!pairs.insert({i, j}).second)
      throw InputError("duplicate bracket entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    const json& ts = member(entry, "terms");
    if (!ts.is_array()) throw InputError("'terms' must be an array");
    std::set<std::size_t> ks;
    for (const auto& t : ts) {
      const std::size_t k = parse_index(member(t, "k"), dim, "k");
      if (!ks.insert(k).second) throw InputError("duplicate k in bracket terms");
      terms.push_back(BracketTerm<T>{i, j, k, parse_scalar<T>(member(t, "value"))});
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc.at("labels").is_array()) throw InputError("'labels' must be an array of strings");
    for (const auto& l : doc.at("labels")) {
      if (!l.is_string()) throw InputError("'labels' must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
    if (labels.size() != dim) throw InputError("'labels' must have dim entries");
  }
  return LieAlgebra<T>::from_brackets(dim, terms, std::move(labels));
}

}  // namespace

template <>
Rational parse_scalar<Rational>(const json& value) {
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (value.is_number_integer()) return Rational(value.get<long long>());
  throw InputError("rational scalars must be strings \"p/q\" or integers, got " + value.dump());
}

template <>
double parse_scalar<double>(const json& value) {
  if (value.is_number()) {
    const double x = value.get<double>();
    if (!std::isfinite(x)) throw InputError("non-finite scalar");
    return x;
  }
  if (value.is_string()) {
    try {
      return to_double(parse_rational(value.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  throw InputError("float scalars must be numbers, got " + value.dump());
}

AnyAlgebra parse_algebra(const json& doc) {
  if (!doc.is_object()) throw InputError("algebra document must be a JSON object");
  const json& d = member(doc, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1 || d.get<long long>() > 64)
    throw InputError("'dim' must be an integer in 1..64");
  const auto dim = static_cast<std::size_t>(d.get<long long>());
  const std::string field = doc.contains("field") ? doc.at("field").get<std::string>() : "rational";
  try {
    if (field == "rational") return parse_brackets<Rational>(doc, dim);
    if (field == "float") return parse_brackets<double>(doc, dim);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  throw InputError("'field' must be \"rational\" or \"float\"");
}

template <Field T>
Matrix<T> parse_matrix(const json& rows, std::size_t dim, const char* what) {
  if (!rows.is_array() || rows.size() != dim)
    throw InputError(std::string(what) + " must be a " + std::to_string(dim) + "x" + std::to_string(dim) + " array");
  Matrix<T> m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!rows[i].is_array() || rows[i].size() != dim)
      throw InputError(std::string(what) + " row " + std::to_string(i + 1) + " has the wrong length");
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = parse_scalar<T>(rows[i][j]);
  }
  return m;
}

template <>
json scalar_to_json<Rational>(const Rational& x) {
  return format_rational(x);
}

template <>
json scalar_to_json<double>(const double& x) {
  return x;
}

template <Field T>
json algebra_to_json(const LieAlgebra<T>& alg) {
  const std::size_t n = alg.dim();
  json doc;
  doc["dim"] = n;
  doc["field"] = is_exact_v<T> ? "rational" : "float";
  json brackets = json::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      json terms = json::array();
      for (std::size_t k = 0; k < n; ++k)
        if (alg.constant(i, j, k) != 0) terms.push_back({{"k", k + 1}, {"value", scalar_to_json(alg.constant(i, j, k))}});
      if (!terms.empty()) brackets.push_back({{"i", i + 1}, {"j", j + 1}, {"terms", terms}});
    }
  doc["brackets"] = brackets;
  if (!alg.labels().empty()) doc["labels"] = alg.labels();
  return doc;
}

template <Field T>
json matrix_to_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <Field T>
json vector_to_json(const Vector<T>& v) {
  json out = json::array();
  for (const T& x : v) out.push_back(scalar_to_json(x));
  return out;
}

json read_json_file(const std::string& path, std::string* raw) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (raw) *raw = text;
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

#define HLIE_INSTANTIATE(T)                                                  \
  template Matrix<T> parse_matrix<T>(const json&, std::size_t, const char*); \
  template json algebra_to_json(const LieAlgebra<T>&);                       \
  template json matrix_to_json(const Matrix<T>&);                            \
  template json vector_to_json(const Vector<T>&);

HLIE_INSTANTIATE(double)
HLIE_INSTANTIATE(Rational)

#undef HLIE_INSTANTIATE

}  // namespace hlie
