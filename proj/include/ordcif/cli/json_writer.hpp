#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

namespace ordcif::cli {

// Serializes with keys in insertion order and every floating-point number
// printed with 17 significant digits, so values round-trip exactly.
void write_json(std::ostream& out, const nlohmann::ordered_json& doc, int indent = 2);
std::string dump_json(const nlohmann::ordered_json& doc, int indent = 2);

std::string format_double(double v);

}  // namespace ordcif::cli
