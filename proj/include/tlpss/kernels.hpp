#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and
// an AVX2 variant; the variant is picked once at startup from CPUID and can
// be forced with TLPSS_ISA=scalar|avx2 or set_isa().

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace tlpss::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Returns false (and leaves the selection unchanged) when unsupported.
bool set_isa(Isa isa) noexcept;

/// out[k] = (1/(1+exp(x[k]/p - a)) + q) / (q + 1), evaluated without overflow.
using AsfBatchFn = void (*)(const double* x, double* out, std::size_t n, double p, double a,
                            double q);

/// Intersects two strictly increasing id arrays. Writes the positions of each
/// match in `a` and `b` (in increasing order) and returns the match count.
/// Either output pointer may be null when only the count is wanted.
using IntersectFn = std::size_t (*)(const std::int32_t* a, std::size_t na, const std::int32_t* b,
                                    std::size_t nb, std::uint32_t* pos_a, std::uint32_t* pos_b);

/// Sum of values[idx[k]] for k < n.
using GatherSumFn = double (*)(const double* values, const std::uint32_t* idx, std::size_t n);

struct KernelTable {
  AsfBatchFn asf_batch;
  IntersectFn intersect;
  GatherSumFn gather_sum;
};

const KernelTable& table(Isa isa) noexcept;
const KernelTable& active() noexcept;

namespace scalar {
void asf_batch(const double* x, double* out, std::size_t n, double p, double a, double q);
std::size_t intersect(const std::int32_t* a, std::size_t na, const std::int32_t* b,
                      std::size_t nb, std::uint32_t* pos_a, std::uint32_t* pos_b);
double gather_sum(const double* values, const std::uint32_t* idx, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void asf_batch(const double* x, double* out, std::size_t n, double p, double a, double q);
std::size_t intersect(const std::int32_t* a, std::size_t na, const std::int32_t* b,
                      std::size_t nb, std::uint32_t* pos_a, std::uint32_t* pos_b);
double gather_sum(const double* values, const std::uint32_t* idx, std::size_t n);
}  // namespace avx2
#endif

}  // namespace tlpss::kernels
