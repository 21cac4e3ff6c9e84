#pragma once

// JSON fragments for numeric arrays. Doubles are written with 17
// significant digits, which round-trips every finite 64-bit value.

#include <nlohmann/json.hpp>
#include <string>

#include "oc4seq/nn.hpp"

namespace oc4seq::serialize {

std::string format_double(double v);
/// [v0,v1,...]
std::string vector_json(const nn::Vector& v);
/// [[rows,cols],[row-major values]]
std::string matrix_json(const nn::Matrix& m);

nn::Vector vector_from_json(const nlohmann::json& j);
nn::Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace oc4seq::serialize
