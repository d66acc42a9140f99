#pragma once

namespace ordcif {

// Standard normal distribution function, via erfc for accuracy in both tails.
double std_normal_cdf(double x);

// 1 - Phi(x), without cancellation for large x.
double std_normal_sf(double x);

// Inverse of std_normal_cdf on (0, 1).
double std_normal_quantile(double p);

}  // namespace ordcif
