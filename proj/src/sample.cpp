#include "ordcif/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordcif/error.hpp"

namespace ordcif {

std::size_t Sample::count(int cause) const {
  return static_cast<std::size_t>(std::count_if(
      obs_.begin(), obs_.end(), [cause](const Observation& o) { return o.cause.code == cause; }));
}

std::vector<Record> Sample::records() const {
  std::vector<Record> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.emplace_back(o.time, o.cause.code);
  return out;
}

Sample build_sample(std::span<const Record> records, int k) {
  if (k < 2) throw Error(Errc::BadK, "k must be at least 2, got " + std::to_string(k));
  if (records.empty()) throw Error(Errc::EmptyInput, "no observations");

  Sample s;
  s.k_ = k;
  s.obs_.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto [time, code] = records[i];
    if (!std::isfinite(time) || time <= 0.0) {
      throw Error(Errc::NonPositiveTime,
                  "record " + std::to_string(i) + " has time " + std::to_string(time));
    }
    if (code < 0 || code > k) {
      throw Error(Errc::CauseOutOfRange, "record " + std::to_string(i) + " has cause " +
                                             std::to_string(code) + " outside 0.." +
                                             std::to_string(k));
    }
    s.obs_.push_back({time, Cause{code}});
    if (code == 0) ++s.censored_count_;
  }

  std::stable_sort(s.obs_.begin(), s.obs_.end(), [](const Observation& a, const Observation& b) {
    if (a.time != b.time) return a.time < b.time;
    // events (code >= 1) first, censorings last
    const int ra = a.cause.censored() ? 1 : 0;
    const int rb = b.cause.censored() ? 1 : 0;
    if (ra != rb) return ra < rb;
    return a.cause.code < b.cause.code;
  });
  return s;
}

}  // namespace ordcif
