#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "tlpss/kernels.hpp"

namespace tlpss::kernels {
namespace {

std::vector<std::int32_t> sorted_ids(std::mt19937_64& rng, std::size_t n, std::int32_t range) {
  std::uniform_int_distribution<std::int32_t> pick(0, range);
  std::set<std::int32_t> s;
  while (s.size() < n) s.insert(pick(rng));
  return {s.begin(), s.end()};
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!isa_supported(Isa::kAvx2)) GTEST_SKIP() << "AVX2 not available on this CPU";
  }
};

TEST(KernelDispatch, ScalarAlwaysAvailable) {
  EXPECT_TRUE(isa_supported(Isa::kScalar));
  EXPECT_EQ(isa_name(Isa::kScalar), "scalar");
  const Isa before = active_isa();
  EXPECT_TRUE(set_isa(Isa::kScalar));
  EXPECT_EQ(active_isa(), Isa::kScalar);
  EXPECT_EQ(active().intersect, table(Isa::kScalar).intersect);
  set_isa(before);
}

TEST(ScalarKernels, IntersectMatchesStd) {
  std::mt19937_64 rng(1);
  for (int round = 0; round < 200; ++round) {
    const auto a = sorted_ids(rng, rng() % 50, 120);
    const auto b = sorted_ids(rng, rng() % 50, 120);
    std::vector<std::int32_t> expect;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(expect));
    std::vector<std::uint32_t> pa(std::min(a.size(), b.size())), pb(pa.size());
    const auto k = scalar::intersect(a.data(), a.size(), b.data(), b.size(), pa.data(), pb.data());
    ASSERT_EQ(k, expect.size());
    for (std::size_t t = 0; t < k; ++t) {
      EXPECT_EQ(a[pa[t]], expect[t]);
      EXPECT_EQ(b[pb[t]], expect[t]);
    }
  }
}

TEST_F(KernelEquivalence, IntersectIsIdentical) {
  std::mt19937_64 rng(2);
  for (int round = 0; round < 2000; ++round) {
    const std::size_t na = rng() % 70, nb = rng() % 70;
    const auto range = static_cast<std::int32_t>(10 + rng() % 300);
    const auto a = sorted_ids(rng, std::min<std::size_t>(na, range), range);
    const auto b = sorted_ids(rng, std::min<std::size_t>(nb, range), range);
    std::vector<std::uint32_t> sa(70), sb(70), va(70), vb(70);
    const auto ks = scalar::intersect(a.data(), a.size(), b.data(), b.size(), sa.data(), sb.data());
    const auto kv = avx2::intersect(a.data(), a.size(), b.data(), b.size(), va.data(), vb.data());
    ASSERT_EQ(ks, kv);
    for (std::size_t t = 0; t < ks; ++t) {
      ASSERT_EQ(sa[t], va[t]);
      ASSERT_EQ(sb[t], vb[t]);
    }
    EXPECT_EQ(avx2::intersect(a.data(), a.size(), b.data(), b.size(), nullptr, nullptr), ks);
  }
}

TEST_F(KernelEquivalence, AsfBatchWithinTwoUlp) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(0.0, 2000.0), p(0.05, 20.0), q(0.0, 10.0),
      a(-5.0, 10.0);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> in(37), s(37), v(37);
    for (auto& e : in) e = x(rng) * (round % 2 ? 1.0 : 0.01);
    const double pp = p(rng), qq = q(rng), aa = a(rng);
    scalar::asf_batch(in.data(), s.data(), in.size(), pp, aa, qq);
    avx2::asf_batch(in.data(), v.data(), in.size(), pp, aa, qq);
    for (std::size_t k = 0; k < in.size(); ++k) {
      const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(s[k]) + 1e-300;
      ASSERT_NEAR(s[k], v[k], tol) << "x=" << in[k] << " p=" << pp << " q=" << qq << " a=" << aa;
    }
  }
}

TEST_F(KernelEquivalence, AsfBatchSaturatedTail) {
  // exp underflow region: both must sit on the floor, and q = 0 must stay >= 0.
  std::vector<double> in{800.0, 1e5, 1e9, 0.0, 1.0};
  std::vector<double> s(in.size()), v(in.size());
  scalar::asf_batch(in.data(), s.data(), in.size(), 1.0, 5.0, 0.0);
  avx2::asf_batch(in.data(), v.data(), in.size(), 1.0, 5.0, 0.0);
  for (std::size_t k = 0; k < in.size(); ++k) {
    EXPECT_GE(v[k], 0.0);
    EXPECT_NEAR(s[k], v[k], 1e-300 + 4e-16 * s[k]);
  }
}

TEST_F(KernelEquivalence, GatherSumWithinRounding) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> val(0.0, 3.0);
  std::vector<double> values(500);
  for (auto& e : values) e = val(rng);
  for (int round = 0; round < 300; ++round) {
    std::vector<std::uint32_t> idx(rng() % 64);
    for (auto& i : idx) i = static_cast<std::uint32_t>(rng() % values.size());
    const double s = scalar::gather_sum(values.data(), idx.data(), idx.size());
    const double v = avx2::gather_sum(values.data(), idx.data(), idx.size());
    EXPECT_NEAR(s, v, 1e-13 * (1.0 + s));
  }
}

}  // namespace
}  // namespace tlpss::kernels
