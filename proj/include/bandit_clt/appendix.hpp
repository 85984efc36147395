#pragma once

// Elementary inequalities used by the limit arguments, as evaluable functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>

#include "bandit_clt/errors.hpp"
#include "bandit_clt/normal.hpp"
#include "bandit_clt/rng.hpp"

namespace bandit_clt {

struct TailBounds {
  double lower = 0.0;  // e^{-z^2/2} / (4 sqrt(pi z^2))
  double tail = 0.0;   // 1 - Phi(z)
  double upper = 0.0;  // e^{-z^2/2} / (2 sqrt(pi z^2))

  bool lower_holds() const { return lower <= tail; }
  bool upper_holds() const { return tail <= upper; }
};

/// Gaussian tail sandwich with constants 1/4 and 1/2, for z > 0.
inline TailBounds gaussian_tail_bounds(double z) {
  if (!(z > 0.0)) throw Error(ErrorKind::InvalidConfig, "tail bounds need z > 0");
  const double root = std::sqrt(std::numbers::pi * z * z);
  const double e = std::exp(-0.5 * z * z);
  return {e / (4.0 * root), normal_sf(z), e / (2.0 * root)};
}

/// Classical Mills-ratio sandwich z/(1+z^2) phi(z) <= 1 - Phi(z) <= phi(z)/z.
inline TailBounds mills_ratio_bounds(double z) {
  if (!(z > 0.0)) throw Error(ErrorKind::InvalidConfig, "tail bounds need z > 0");
  const double phi = normal_pdf(z);
  return {z / (1.0 + z * z) * phi, normal_sf(z), phi / z};
}

/// log(sum_i e^{a_i}), shifted by the maximum so that nothing overflows.
inline double log_sum_exp(std::span<const double> a) {
  if (a.empty()) throw Error(ErrorKind::InvalidConfig, "log_sum_exp of an empty sequence");
  const double m = *std::max_element(a.begin(), a.end());
  if (std::isinf(m)) return m;
  double acc = 0.0;
  for (double x : a) acc += std::exp(x - m);
  return m + std::log(acc);
}

/// Geometric variable on {1, 2, ...} with success probability p, by inversion.
/// Returned as a double so that p near 0 cannot overflow an integer.
inline double sample_geometric(double p, CounterStream& stream) {
  if (!(p > 0.0) || p > 1.0) throw Error(ErrorKind::ZeroProbability, "geometric p must lie in (0, 1]");
  if (p == 1.0) return 1.0;
  return std::max(1.0, std::ceil(std::log(stream.uniform()) / std::log1p(-p)));
}

/// log(G p) for G ~ Geom(p) given log p. For p below ~1e-13, where G itself
/// would not fit in a double, G p is replaced by its exponential limit E = -log U.
inline double log_geometric_scaled(double log_p, CounterStream& stream) {
  if (!(log_p <= 0.0)) throw Error(ErrorKind::ZeroProbability, "log p must be <= 0");
  const double u = stream.uniform();
  if (log_p > -30.0) {
    const double p = std::exp(log_p);
    const double g = p >= 1.0 ? 1.0 : std::max(1.0, std::ceil(std::log(u) / std::log1p(-p)));
    return std::log(g) + log_p;
  }
  return std::log(-std::log(u));
}

/// max_{j <= n} log(G_j p_j) / n^a, with independent G_j ~ Geom(p_j) and
/// p_j = exp(log_p_of_j(j)). Draws are taken from `stream` in order j = 1, 2, ...,
/// so statistics for nested n share a prefix.
inline double geometric_max_statistic(std::uint64_t n, const std::function<double(std::uint64_t)>& log_p_of_j,
                                      double a, CounterStream stream) {
  if (n == 0) throw Error(ErrorKind::InvalidConfig, "need n >= 1");
  double best = -HUGE_VAL;
  for (std::uint64_t j = 1; j <= n; ++j) {
    best = std::max(best, log_geometric_scaled(log_p_of_j(j), stream));
  }
  return best / std::pow(static_cast<double>(n), a);
}

}  // namespace bandit_clt
