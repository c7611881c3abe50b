#ifndef HKLAB_JSON_IO_HPP
#define HKLAB_JSON_IO_HPP

#include <json.hpp>

#include <string>

#include "hklab/exact_linalg.hpp"

namespace hklab {

using Json = nlohmann::json;

class SchemaError : public Error {
 public:
  using Error::Error;
};

// Rationals travel as "p/q" strings so that files stay exact.
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& where);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& where);

Json matrix_to_json(const Matrix& m);
/// `rows`/`cols` are the expected shape; a mismatch is a SchemaError.
Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const std::string& where);

/// Fetches a required member, raising SchemaError naming the path.
const Json& require_member(const Json& obj, const std::string& key, const std::string& where);
long require_int(const Json& obj, const std::string& key, const std::string& where);

/// Canonical text form: sorted keys, two-space indentation, trailing newline.
std::string canonical_dump(const Json& j);

}  // namespace hklab

#endif  // HKLAB_JSON_IO_HPP
