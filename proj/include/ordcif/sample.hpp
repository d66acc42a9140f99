#pragma once

#include <span>
#include <utility>
#include <vector>

namespace ordcif {

// Failure cause; 0 marks a right-censored observation.
struct Cause {
  int code = 0;

  constexpr bool censored() const noexcept { return code == 0; }
  constexpr auto operator<=>(const Cause&) const = default;
};

struct Observation {
  double time = 0.0;
  Cause cause;

  constexpr auto operator<=>(const Observation&) const = default;
};

using Record = std::pair<double, int>;

// Validated competing-risks sample, sorted by time. At equal times events
// precede censorings (and events are ordered by cause code).
class Sample {
 public:
  int k() const noexcept { return k_; }
  std::size_t size() const noexcept { return obs_.size(); }
  const std::vector<Observation>& observations() const noexcept { return obs_; }
  const Observation& operator[](std::size_t i) const { return obs_[i]; }

  bool has_censoring() const noexcept { return censored_count_ > 0; }
  std::size_t censored_count() const noexcept { return censored_count_; }
  std::size_t count(int cause) const;

  // Largest observed time.
  double tau() const noexcept { return obs_.back().time; }

  std::vector<Record> records() const;

  bool operator==(const Sample&) const = default;

 private:
  friend Sample build_sample(std::span<const Record> records, int k);

  int k_ = 2;
  std::vector<Observation> obs_;
  std::size_t censored_count_ = 0;
};

// Errors: BadK (k < 2), EmptyInput, NonPositiveTime (t <= 0 or not finite),
// CauseOutOfRange (code outside 0..k).
Sample build_sample(std::span<const Record> records, int k);

}  // namespace ordcif
