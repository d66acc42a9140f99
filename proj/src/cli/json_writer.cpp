#include "ordcif/cli/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace ordcif::cli {
namespace {

void write_value(std::ostream& out, const nlohmann::ordered_json& v, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << nlohmann::ordered_json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_value(out, it.value(), indent, depth + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& e : v) flat = flat && !e.is_structured();
      if (flat) {
        out << '[';
        for (std::size_t m = 0; m < v.size(); ++m) {
          if (m) out << (indent > 0 ? ", " : ",");
          write_value(out, v[m], indent, depth + 1);
        }
        out << ']';
        return;
      }
      out << '[' << nl;
      for (std::size_t m = 0; m < v.size(); ++m) {
        if (m) out << ',' << nl;
        out << pad;
        write_value(out, v[m], indent, depth + 1);
      }
      out << nl << close_pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float:
      out << format_double(v.get<double>());
      return;
    default:
      out << v.dump();
  }
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostream& out, const nlohmann::ordered_json& doc, int indent) {
  write_value(out, doc, indent, 0);
  out << '\n';
}

std::string dump_json(const nlohmann::ordered_json& doc, int indent) {
  std::ostringstream s;
  write_json(s, doc, indent);
  return s.str();
}

}  // namespace ordcif::cli
