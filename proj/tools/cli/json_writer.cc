#include "cli/json_writer.h"

#include <cmath>
#include <cstdio>

namespace lqnash::cli {

namespace {

void write(const nlohmann::ordered_json& value, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (value.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
        write(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line so matrices read row by row.
      bool flat = true;
      for (const auto& v : value) flat = flat && !v.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (i > 0) out += ", ";
          write(value[i], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        write(value[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case nlohmann::ordered_json::value_t::number_float:
      out += format_double(value.get<double>());
      return;
    default:
      out += value.dump();
      return;
  }
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", value);
  return buf;
}

std::string dump_json(const nlohmann::ordered_json& value) {
  std::string out;
  write(value, 0, out);
  out += "\n";
  return out;
}

}  // namespace lqnash::cli
