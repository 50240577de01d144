#include "tlpss/decay.hpp"

#include <cmath>

#include "tlpss/error.hpp"
#include "tlpss/kernels.hpp"

namespace tlpss {

void validate(const DecayParams& params) {
  if (!(params.p > 0) || !std::isfinite(params.p)) throw ConfigError("ASF p must be > 0");
  if (!(params.q >= 0) || !std::isfinite(params.q)) throw ConfigError("ASF q must be >= 0");
  if (!std::isfinite(params.a)) throw ConfigError("ASF a must be finite");
}

void validate(const ExpDecayParams& params) {
  if (!(params.theta > 0 && params.theta < 1)) throw ConfigError("theta must lie in (0, 1)");
}

double asf(double x, const DecayParams& params) {
  if (!std::isfinite(x)) throw DomainError("ASF argument must be finite");
  double out = 0.0;
  kernels::scalar::asf_batch(&x, &out, 1, params.p, params.a, params.q);
  return out;
}

double asf_floor(const DecayParams& params) noexcept { return params.q / (params.q + 1.0); }

double asf_peak(const DecayParams& params) noexcept { return asf(0.0, params); }

double log_asf_excess(double x, const DecayParams& params) {
  if (!std::isfinite(x)) throw DomainError("ASF argument must be finite");
  const double u = x / params.p - params.a;
  // log sigmoid(-u) = -softplus(u)
  const double softplus = u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  return -softplus - std::log1p(params.q);
}

double exp_decay(double s, double t, const ExpDecayParams& params) {
  if (t < s) throw DomainError("reference time precedes edge time");
  return std::exp(-params.theta * (t - s));
}

void asf_batch(std::span<const double> elapsed, std::span<double> out, const DecayParams& params) {
  if (out.size() < elapsed.size()) throw DomainError("output span too small");
  kernels::active().asf_batch(elapsed.data(), out.data(), elapsed.size(), params.p, params.a,
                              params.q);
}

}  // namespace tlpss
