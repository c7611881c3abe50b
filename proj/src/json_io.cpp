#include "hklab/json_io.hpp"

namespace hklab {

Json rational_to_json(const Rational& r) { return format_rational(r); }

Rational rational_from_json(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rational_to_json(x));
  return out;
}

Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array");
  Vector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i)));
  return out;
}

Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of rows");
  if (j.size() != rows)
    throw SchemaError(where + ": expected " + std::to_string(rows) + " rows, got " +
                      std::to_string(j.size()));
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Vector r = vector_from_json(j[i], where + "[" + std::to_string(i) + "]");
    if (r.size() != cols)
      throw SchemaError(where + "[" + std::to_string(i) + "]: expected " + std::to_string(cols) +
                        " entries, got " + std::to_string(r.size()));
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = r[c];
  }
  return m;
}

const Json& require_member(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing member \"" + key + "\"");
  return *it;
}

long require_int(const Json& obj, const std::string& key, const std::string& where) {
  const Json& v = require_member(obj, key, where);
  if (!v.is_number_integer()) throw SchemaError(where + "." + key + ": expected an integer");
  return v.get<long>();
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hklab
