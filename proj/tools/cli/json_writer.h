#pragma once

// Deterministic JSON emitter: object keys keep insertion order, floating
// point values are written with "%.12e", integers verbatim and non-finite
// numbers as null.

#include <string>

#include <json.hpp>

namespace lqnash::cli {

std::string format_double(double value);

/// Pretty-printed with two-space indentation and a trailing newline.
std::string dump_json(const nlohmann::ordered_json& value);

}  // namespace lqnash::cli
