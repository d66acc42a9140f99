#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordcif/cif_set.hpp"
#include "ordcif/hypothesis_tests.hpp"
#include "ordcif/inference.hpp"

namespace ordcif::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit statuses of the command-line tool.
enum ExitCode : int { kSuccess = 0, kStudyFailed = 1, kUsageError = 2 };

// Skeleton of the JSON result document; every key is always present.
nlohmann::ordered_json result_document(const std::string& command);

nlohmann::ordered_json to_json(const CifSet& cifs);
nlohmann::ordered_json to_json(const TestReport& report);
nlohmann::ordered_json to_json(const Band& raw, const Band& tightened, const CifSet& restricted);

// Entry point shared by the executable and the tests. Writes the document to
// `out` (unless --output is given) and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordcif::cli
