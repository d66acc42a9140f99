#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ordcif/sample.hpp"

namespace ordcif::cli {

// Rows of a `time,cause` CSV file with their 1-based line numbers.
struct Dataset {
  std::vector<Record> records;
  std::vector<int> lines;
  std::string hash;  // fnv1a64 of the raw bytes
};

// Errors: ParseError (message names the line).
Dataset parse_dataset(const std::string& text);
Dataset read_dataset(const std::string& path);

// k defaults to max(2, largest cause code). Validation failures name the
// offending line. Errors: NonPositiveTime, CauseOutOfRange, EmptyInput, BadK.
Sample to_sample(const Dataset& data, std::optional<int> k);

std::string fnv1a64(const std::string& bytes);

}  // namespace ordcif::cli
