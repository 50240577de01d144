#include <atomic>
#include <cstdlib>
#include <string_view>

#include "tlpss/kernels.hpp"

namespace tlpss::kernels {
namespace {

constexpr KernelTable kScalar{&scalar::asf_batch, &scalar::intersect, &scalar::gather_sum};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{&avx2::asf_batch, &avx2::intersect, &avx2::gather_sum};
#endif

Isa detect() noexcept {
  Isa best = isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
  if (const char* env = std::getenv("TLPSS_ISA")) {
    const std::string_view want(env);
    if (want == "scalar") return Isa::kScalar;
    if (want == "avx2" && isa_supported(Isa::kAvx2)) return Isa::kAvx2;
  }
  return best;
}

std::atomic<Isa>& selected() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept { return selected().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) noexcept {
  if (!isa_supported(isa)) return false;
  selected().store(isa, std::memory_order_relaxed);
  return true;
}

const KernelTable& table(Isa isa) noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::kAvx2 && isa_supported(Isa::kAvx2)) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& active() noexcept { return table(active_isa()); }

}  // namespace tlpss::kernels
