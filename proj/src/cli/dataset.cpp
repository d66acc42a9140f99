#include "ordcif/cli/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ordcif/error.hpp"

namespace ordcif::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

Dataset parse_dataset(const std::string& text) {
  Dataset data;
  data.hash = fnv1a64(text);
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view row = raw;
    if (line == 1 && row.starts_with("\xEF\xBB\xBF")) row.remove_prefix(3);
    row = trim(row);
    if (row.empty()) continue;

    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      fail(line, "expected exactly two comma-separated fields");
    }
    const std::string_view a = trim(row.substr(0, comma));
    const std::string_view b = trim(row.substr(comma + 1));
    if (!header_seen) {
      if (a != "time" || b != "cause") fail(line, "header must be 'time,cause'");
      header_seen = true;
      continue;
    }

    double time = 0.0;
    auto [tp, tec] = std::from_chars(a.data(), a.data() + a.size(), time);
    if (tec != std::errc() || tp != a.data() + a.size() || !std::isfinite(time)) {
      fail(line, "cannot parse time '" + std::string(a) + "'");
    }
    int cause = 0;
    auto [cp, cec] = std::from_chars(b.data(), b.data() + b.size(), cause);
    if (cec != std::errc() || cp != b.data() + b.size()) {
      fail(line, "cannot parse cause '" + std::string(b) + "'");
    }
    data.records.emplace_back(time, cause);
    data.lines.push_back(line);
  }
  if (!header_seen) throw Error(Errc::ParseError, "missing header 'time,cause'");
  return data;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

Sample to_sample(const Dataset& data, std::optional<int> k) {
  if (data.records.empty()) throw Error(Errc::EmptyInput, "no data rows");
  int max_code = 0;
  for (const auto& [time, code] : data.records) max_code = std::max(max_code, code);
  const int kk = k.value_or(std::max(2, max_code));
  if (kk < 2) throw Error(Errc::BadK, "k must be at least 2, got " + std::to_string(kk));

  bool any_event = false;
  for (std::size_t r = 0; r < data.records.size(); ++r) {
    const auto [time, code] = data.records[r];
    const std::string where = "line " + std::to_string(data.lines[r]);
    if (!(time > 0.0)) throw Error(Errc::NonPositiveTime, where + ": time must be positive");
    if (code < 0 || code > kk) {
      throw Error(Errc::CauseOutOfRange,
                  where + ": cause " + std::to_string(code) + " outside 0.." + std::to_string(kk));
    }
    any_event = any_event || code > 0;
  }
  if (!any_event) throw Error(Errc::EmptyInput, "every row is censored; nothing to estimate");
  return build_sample(data.records, kk);
}

}  // namespace ordcif::cli
