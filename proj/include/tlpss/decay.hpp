#pragma once

#include <span>

namespace tlpss {

/// Adjusted sigmoid parameters: `p` stretches the active period, `q` lifts
/// the stable floor to q/(q+1), `a` shifts the curve.
struct DecayParams {
  double p = 1.0;
  double q = 1.0;
  double a = 5.0;
};

struct ExpDecayParams {
  double theta = 0.5;
};

void validate(const DecayParams& params);
void validate(const ExpDecayParams& params);

/// ((1 / (1 + exp(x/p - a))) + q) / (q + 1) for elapsed snapshots x >= 0.
double asf(double x, const DecayParams& params);

/// Infimum of asf over x >= 0: q / (q + 1).
double asf_floor(const DecayParams& params) noexcept;

/// asf(0), the supremum over x >= 0.
double asf_peak(const DecayParams& params) noexcept;

/// log(asf(x) - asf_floor) computed without cancellation. Stays finite (and
/// strictly decreasing in x) long after asf itself has rounded onto its floor.
double log_asf_excess(double x, const DecayParams& params);

/// exp(-theta * (t - s)). Throws DomainError when t < s.
double exp_decay(double s, double t, const ExpDecayParams& params);

/// Elementwise asf over a batch of elapsed times, via the active SIMD kernel.
void asf_batch(std::span<const double> elapsed, std::span<double> out,
               const DecayParams& params);

}  // namespace tlpss
