#include <cmath>

#include "tlpss/kernels.hpp"

namespace tlpss::kernels::scalar {

void asf_batch(const double* x, double* out, std::size_t n, double p, double a, double q) {
  const double q1 = q + 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = x[k] / p - a;
    // sigmoid(-u) from exp of a non-positive argument only.
    const double e = std::exp(-std::fabs(u));
    const double sig = u >= 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
    out[k] = (sig + q) / q1;
  }
}

std::size_t intersect(const std::int32_t* a, std::size_t na, const std::int32_t* b,
                      std::size_t nb, std::uint32_t* pos_a, std::uint32_t* pos_b) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < na && j < nb) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      if (pos_a) pos_a[count] = static_cast<std::uint32_t>(i);
      if (pos_b) pos_b[count] = static_cast<std::uint32_t>(j);
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double gather_sum(const double* values, const std::uint32_t* idx, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += values[idx[k]];
  return sum;
}

}  // namespace tlpss::kernels::scalar
