#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "bandit_clt/errors.hpp"
#include "bandit_clt/rng.hpp"

namespace bandit_clt {

enum class ArmKind { Gaussian, Uniform, ShiftedExponential, ScaledBernoulli };

constexpr std::string_view to_string(ArmKind kind) {
  switch (kind) {
    case ArmKind::Gaussian: return "gaussian";
    case ArmKind::Uniform: return "uniform";
    case ArmKind::ShiftedExponential: return "shifted-exponential";
    case ArmKind::ScaledBernoulli: return "scaled-bernoulli";
  }
  return "unknown";
}

inline ArmKind parse_arm_kind(std::string_view name) {
  if (name == "gaussian") return ArmKind::Gaussian;
  if (name == "uniform") return ArmKind::Uniform;
  if (name == "shifted-exponential") return ArmKind::ShiftedExponential;
  if (name == "scaled-bernoulli") return ArmKind::ScaledBernoulli;
  throw Error(ErrorKind::InvalidArm, "unknown arm kind '" + std::string(name) + "'");
}

/// Reward distribution of one arm with its closed-form first two moments.
///
/// Parameterizations:
///   gaussian             {mean, std}
///   uniform              {low, high}
///   shifted-exponential  {shift, rate}      X = shift + Exp(rate)
///   scaled-bernoulli     {p, scale}         X = scale * Bernoulli(p)
struct ArmSpec {
  ArmKind kind = ArmKind::Gaussian;
  std::vector<double> params;
  double mean = 0.0;
  double variance = 1.0;

  static ArmSpec gaussian(double mean, double std) { return make(ArmKind::Gaussian, {mean, std}); }
  static ArmSpec uniform(double low, double high) { return make(ArmKind::Uniform, {low, high}); }
  static ArmSpec shifted_exponential(double shift, double rate) {
    return make(ArmKind::ShiftedExponential, {shift, rate});
  }
  static ArmSpec scaled_bernoulli(double p, double scale) {
    return make(ArmKind::ScaledBernoulli, {p, scale});
  }

  /// Validates params and fills mean/variance from the closed forms.
  static ArmSpec make(ArmKind kind, std::vector<double> params) {
    auto need = [&](std::size_t n) {
      if (params.size() != n) {
        throw Error(ErrorKind::InvalidArm, std::string(to_string(kind)) + " takes " +
                                               std::to_string(n) + " parameters");
      }
      for (double p : params) {
        if (!std::isfinite(p)) throw Error(ErrorKind::InvalidArm, "non-finite parameter");
      }
    };
    ArmSpec arm;
    arm.kind = kind;
    switch (kind) {
      case ArmKind::Gaussian:
        need(2);
        if (params[1] < 0.0) throw Error(ErrorKind::InvalidArm, "gaussian std must be >= 0");
        arm.mean = params[0];
        arm.variance = params[1] * params[1];
        break;
      case ArmKind::Uniform:
        need(2);
        if (!(params[0] < params[1])) throw Error(ErrorKind::InvalidArm, "uniform needs low < high");
        arm.mean = 0.5 * (params[0] + params[1]);
        arm.variance = (params[1] - params[0]) * (params[1] - params[0]) / 12.0;
        break;
      case ArmKind::ShiftedExponential:
        need(2);
        if (!(params[1] > 0.0)) throw Error(ErrorKind::InvalidArm, "exponential rate must be > 0");
        arm.mean = params[0] + 1.0 / params[1];
        arm.variance = 1.0 / (params[1] * params[1]);
        break;
      case ArmKind::ScaledBernoulli:
        need(2);
        if (!(params[0] >= 0.0 && params[0] <= 1.0)) {
          throw Error(ErrorKind::InvalidArm, "bernoulli p must lie in [0, 1]");
        }
        arm.mean = params[1] * params[0];
        arm.variance = params[1] * params[1] * params[0] * (1.0 - params[0]);
        break;
    }
    arm.params = std::move(params);
    return arm;
  }

  /// One reward draw using `stream`.
  double sample(CounterStream& stream) const {
    switch (kind) {
      case ArmKind::Gaussian: return params[0] + params[1] * stream.normal();
      case ArmKind::Uniform: return params[0] + (params[1] - params[0]) * stream.uniform();
      case ArmKind::ShiftedExponential: return params[0] - std::log(stream.uniform()) / params[1];
      case ArmKind::ScaledBernoulli: return stream.uniform() < params[0] ? params[1] : 0.0;
    }
    return 0.0;
  }

  double std_dev() const { return std::sqrt(variance); }
};

}  // namespace bandit_clt
