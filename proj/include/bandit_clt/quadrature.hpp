#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace bandit_clt {

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
/// Nodes are found by Newton iteration on the orthonormal Hermite recurrence,
/// seeded with the usual asymptotic guesses; they come out in descending order.
template <std::size_t N>
struct GaussHermite {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussHermite() {
    constexpr double pim4 = 0.7511255444649425;  // pi^(-1/4)
    constexpr std::size_t half = (N + 1) / 2;
    const double n = static_cast<double>(N);
    double z = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      if (i == 0) {
        z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
      } else if (i == 1) {
        z -= 1.14 * std::pow(n, 0.426) / z;
      } else if (i == 2) {
        z = 1.86 * z - 0.86 * nodes[0];
      } else if (i == 3) {
        z = 1.91 * z - 0.91 * nodes[1];
      } else {
        z = 2.0 * z - nodes[i - 2];
      }
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = pim4;
        double p2 = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          const double p3 = p2;
          p2 = p1;
          const double jd = static_cast<double>(j);
          p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
      }
      nodes[i] = z;
      nodes[N - 1 - i] = -z;
      weights[i] = 2.0 / (pp * pp);
      weights[N - 1 - i] = weights[i];
    }
  }

  /// E[f(Z)] for Z ~ N(0, 1).
  template <class F>
  double expect_standard_normal(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += weights[i] * f(std::numbers::sqrt2 * nodes[i]);
    return acc / std::sqrt(std::numbers::pi);
  }
};

inline const GaussHermite<64>& gauss_hermite_64() {
  static const GaussHermite<64> rule;
  return rule;
}

}  // namespace bandit_clt
