#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bandit_clt/errors.hpp"
#include "bandit_clt/normal.hpp"

namespace bandit_clt {

/// Streaming count/mean/M2/M3 with the pairwise merge of Chan et al. and
/// Terriberry's third-moment extension.
class MomentAccumulator {
 public:
  void add(double x) noexcept {
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
  }

  void merge(const MomentAccumulator& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double delta = o.mean_ - mean_;
    const double delta2 = delta * delta;
    const double m2 = m2_ + o.m2_ + delta2 * na * nb / n;
    const double m3 = m3_ + o.m3_ + delta * delta2 * na * nb * (na - nb) / (n * n) +
                      3.0 * delta * (na * o.m2_ - nb * m2_) / n;
    mean_ = (na * mean_ + nb * o.mean_) / n;
    m2_ = m2;
    m3_ = m3;
    n_ += o.n_;
  }

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return n_ ? mean_ : NAN; }
  /// Unbiased; NaN below two samples.
  double variance() const noexcept {
    return n_ >= 2 ? std::max(0.0, m2_ / static_cast<double>(n_ - 1)) : NAN;
  }
  double std_dev() const noexcept { return std::sqrt(variance()); }
  /// g1 = m3 / m2^{3/2} with biased central moments; NaN if undefined.
  double skewness() const noexcept {
    if (n_ < 2 || !(m2_ > 0.0)) return NAN;
    const double n = static_cast<double>(n_);
    return std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
  }
  bool variance_defined() const noexcept { return n_ >= 2; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
};

/// Unit-width integer bins.
class Histogram {
 public:
  void add(std::int64_t value, std::uint64_t weight = 1) { bins_[value] += weight; }
  void merge(const Histogram& o) {
    for (const auto& [v, c] : o.bins_) bins_[v] += c;
  }
  std::uint64_t total() const noexcept {
    std::uint64_t s = 0;
    for (const auto& [v, c] : bins_) s += c;
    return s;
  }
  const std::map<std::int64_t, std::uint64_t>& bins() const noexcept { return bins_; }

 private:
  std::map<std::int64_t, std::uint64_t> bins_;
};

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and the
/// fully specified Normal(ref_mean, ref_std^2). Nothing is estimated from the data.
inline double ks_normal(std::span<const double> samples, double ref_mean, double ref_std) {
  if (!(ref_std > 0.0)) throw Error(ErrorKind::DegenerateReference, "reference std must be positive");
  if (samples.size() < 2) throw Error(ErrorKind::InvalidConfig, "KS needs at least 2 samples");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;  // ties jump the ECDF at once
    const double f = normal_cdf((xs[i] - ref_mean) / ref_std);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(j) / n - f});
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::InvalidConfig, "correlation needs two equal columns of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorKind::DegenerateVariance, "constant column");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Pearson correlation matrix of the given columns (one column per arm,
/// one row per replication). Unit diagonal.
inline std::vector<std::vector<double>> independence_check(const std::vector<std::vector<double>>& columns) {
  if (columns.size() < 2) throw Error(ErrorKind::InvalidConfig, "need at least two sub-optimal arms");
  for (const auto& c : columns) {
    if (c.size() < 2) throw Error(ErrorKind::InvalidConfig, "need at least two replications");
  }
  const std::size_t m = columns.size();
  std::vector<std::vector<double>> rho(m, std::vector<double>(m, 1.0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      rho[a][b] = rho[b][a] = pearson(columns[a], columns[b]);
    }
  }
  return rho;
}

}  // namespace bandit_clt
