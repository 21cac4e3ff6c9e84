#include "oc4seq/serialize.hpp"

#include <cmath>
#include <fmt/format.h>

#include "oc4seq/errors.hpp"

namespace oc4seq::serialize {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw NumericError("cannot serialise a non-finite value");
  return fmt::format("{:.17g}", v);
}

std::string vector_json(const nn::Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  out += ']';
  return out;
}

std::string matrix_json(const nn::Matrix& m) {
  std::string out = fmt::format("[[{},{}],[", m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i || j) out += ',';
      out += format_double(m(i, j));
    }
  }
  out += "]]";
  return out;
}

nn::Vector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DataError("expected a JSON array of numbers");
  nn::Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DataError("expected a number in array");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

nn::Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2) {
    throw DataError("expected [[rows,cols],[values]]");
  }
  const auto rows = j[0][0].get<Eigen::Index>();
  const auto cols = j[0][1].get<Eigen::Index>();
  const nn::Vector flat = vector_from_json(j[1]);
  if (rows <= 0 || cols <= 0 || flat.size() != rows * cols) {
    throw DataError("matrix shape does not match its value count");
  }
  nn::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = flat[i * cols + c];
  }
  return m;
}

}  // namespace oc4seq::serialize
