#pragma once

#include <random>
#include <vector>

#include "ordcif/sample.hpp"

namespace fixtures {

// Random sample on a coarse time lattice, so ties between events and
// censorings are common. censor_prob = 0 gives an uncensored sample.
inline ordcif::Sample random_sample(std::mt19937_64& rng, int n, int k, double censor_prob,
                                    int lattice = 30) {
  std::uniform_int_distribution<int> tick(1, lattice);
  std::uniform_int_distribution<int> cause(1, k);
  std::bernoulli_distribution censor(censor_prob);
  std::vector<ordcif::Record> recs;
  for (int i = 0; i < n; ++i) recs.emplace_back(0.25 * tick(rng), censor(rng) ? 0 : cause(rng));
  if (censor_prob > 0.0 && recs.front().second != 0) recs.front().second = 0;
  if (recs.back().second == 0) recs.back().second = 1;
  return ordcif::build_sample(recs, k);
}

inline ordcif::Sample small_censored() {
  const std::vector<ordcif::Record> recs{{1.0, 1}, {2.0, 0}, {3.0, 1}};
  return ordcif::build_sample(recs, 2);
}

}  // namespace fixtures
