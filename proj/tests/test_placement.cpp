#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cachecode/placement.hpp"
#include "oracles.hpp"

namespace cc = cachecode;

namespace {

cc::UserMask mask(std::initializer_list<int> users) {
  cc::UserMask m = 0;
  for (int k : users) m |= cc::user_bit(k);
  return m;
}

cc::ExtField field_for(int m, std::uint32_t q = 5) {
  return cc::ExtField::with_degree(cc::make_prime_field(q), m, 1);
}

}  // namespace

TEST(SchemeParams, RejectsOutOfRange) {
  EXPECT_THROW(cc::SchemeParams(3, 2, 1), cc::InvalidParams);
  EXPECT_THROW(cc::SchemeParams(2, 4, 0), cc::InvalidParams);
  EXPECT_THROW(cc::SchemeParams(2, 4, 4), cc::InvalidParams);
  EXPECT_THROW(cc::SchemeParams(1, 1, 1), cc::InvalidParams);
}

TEST(SchemeParams, CodeSizes) {
  const cc::SchemeParams p(2, 4, 2);
  EXPECT_EQ(p.basis_size(), 6);
  EXPECT_EQ(p.code_length(), 10);
  EXPECT_EQ(p.semi_code_length(), 7);
  EXPECT_EQ(p.cache_size(), 4);
  const cc::SchemeParams q(2, 2, 1);
  EXPECT_EQ(q.basis_size(), 2);
  EXPECT_EQ(q.code_length(), 3);
}

TEST(SchemeParams, CacheSizeIdentityOverGrid) {
  for (int K = 2; K <= 12; ++K)
    for (int N = 1; N <= K; ++N)
      for (int t = 1; t < K; ++t) {
        const cc::SchemeParams p(N, K, t);
        EXPECT_EQ(p.cache_size(), oracle::pascal(K - 1, t - 1) * N - oracle::pascal(K - 2, t - 1) * (N - 1));
        EXPECT_EQ(p.semi_code_length() - p.basis_size() + p.semi_sum_count(), p.cache_size());
      }
}

TEST(UserBasis, TwoFourTwoUserOne) {
  const cc::SchemeParams p(2, 4, 2);
  const std::vector<cc::SegmentId> expect{{1, mask({1, 2})}, {1, mask({1, 3})}, {1, mask({1, 4})},
                                          {2, mask({1, 2})}, {2, mask({1, 3})}, {2, mask({1, 4})}};
  EXPECT_EQ(cc::user_basis(p, 1), expect);
  EXPECT_THROW(cc::user_basis(p, 5), cc::InvalidParams);
}

TEST(UserBasis, SizeIsPOnRandomParams) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 2 + static_cast<int>(rng() % 9);
    const int N = 1 + static_cast<int>(rng() % static_cast<unsigned>(K));
    const int t = 1 + static_cast<int>(rng() % static_cast<unsigned>(K - 1));
    const cc::SchemeParams p(N, K, t);
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(K));
    const auto basis = cc::user_basis(p, k);
    EXPECT_EQ(static_cast<std::int64_t>(basis.size()), oracle::pascal(K - 1, t - 1) * N);
    for (const auto& s : basis) EXPECT_TRUE(cc::has_user(s.users, k));
    for (std::size_t i = 1; i < basis.size(); ++i) EXPECT_TRUE(cc::canonical_less(basis[i - 1], basis[i]));
  }
}

TEST(UserBasis, TopPlacementHoldsEveryContainingSubset) {
  const cc::SchemeParams p(3, 5, 4);
  EXPECT_EQ(cc::user_basis(p, 2).size(), static_cast<std::size_t>(oracle::pascal(4, 3) * 3));
}

TEST(SegmentIndex, RoundTrip) {
  const cc::SchemeParams p(3, 5, 2);
  const cc::SegmentIndex idx(p);
  EXPECT_EQ(idx.size(), 30);
  for (int i = 0; i < idx.size(); ++i) EXPECT_EQ(idx.index(idx.id(i)), i);
  EXPECT_EQ(cc::segment_label({1, mask({1, 4})}), "A_{1,4}");
}

TEST(PlaceRankMetric, TwoFourTwoCachesFourSymbols) {
  const cc::SchemeParams p(2, 4, 2);
  const auto ext = field_for(10);
  const auto caches = cc::place_rank_metric(cc::random_library(p, ext, 1));
  ASSERT_EQ(caches.size(), 4U);
  for (const auto& c : caches) EXPECT_EQ(c.symbols.size(), 4U);
  EXPECT_EQ(cc::memory_usage(p), cc::Rational(2, 3));
}

TEST(PlaceRankMetric, TwoTwoOne) {
  const cc::SchemeParams p(2, 2, 1);
  const auto caches = cc::place_rank_metric(cc::random_library(p, field_for(3, 3), 1));
  for (const auto& c : caches) EXPECT_EQ(c.symbols.size(), 1U);
  EXPECT_EQ(cc::memory_usage(p), cc::Rational(1, 2));
}

TEST(PlaceRankMetric, ZeroLibraryGivesZeroCache) {
  const cc::SchemeParams p(2, 4, 2);
  const auto ext = field_for(10);
  const cc::Library lib(p, ext, std::vector<cc::ExtElement>(12, ext.zero()));
  for (const auto& c : cc::place_rank_metric(lib))
    for (const auto& s : c.symbols) EXPECT_TRUE(ext.is_zero(s));
}

TEST(PlaceRankMetric, CoefficientMatrixReproducesSymbols) {
  const cc::SchemeParams p(3, 5, 2);
  const auto ext = field_for(p.code_length(), 7);
  const auto lib = cc::random_library(p, ext, 4);
  for (const auto& c : cc::place_rank_metric(lib)) {
    std::vector<cc::ExtElement> basis;
    for (const auto& s : cc::user_basis(p, c.user)) basis.push_back(lib.value(s));
    EXPECT_EQ(cc::multiply(c.segment_rows, std::span<const cc::ExtElement>(basis)), c.symbols);
  }
}

TEST(PlaceSemiSystematic, SumsThenOneParity) {
  const cc::SchemeParams p(2, 4, 2);
  const auto ext = field_for(7);
  const auto lib = cc::random_library(p, ext, 6);
  const auto caches = cc::place_semi_systematic(lib);
  for (const auto& c : caches) {
    ASSERT_EQ(c.symbols.size(), 4U);
    std::size_t i = 0;
    for (auto S : cc::lex_subsets(4, 2)) {
      if (!cc::has_user(S, c.user)) continue;
      EXPECT_EQ(c.symbols[i++], ext.add(lib.value({1, S}), lib.value({2, S})));
    }
  }
}

TEST(PlaceSemiSystematic, IdenticalFilesSumToNTimes) {
  const cc::SchemeParams p(3, 4, 2);
  const auto ext = field_for(p.semi_code_length(), 7);
  std::mt19937_64 rng(3);
  std::vector<cc::ExtElement> per_subset;
  for (int i = 0; i < 6; ++i) per_subset.push_back(ext.random(rng));
  std::vector<cc::ExtElement> values;
  for (int n = 0; n < 3; ++n) values.insert(values.end(), per_subset.begin(), per_subset.end());
  const cc::Library lib(p, ext, values);
  const auto caches = cc::place_semi_systematic(lib);
  std::size_t i = 0;
  for (auto S : cc::lex_subsets(4, 2)) {
    if (!cc::has_user(S, 1)) continue;
    EXPECT_EQ(caches[0].symbols[i++], ext.scale(lib.value({1, S}), 3));
  }
}

TEST(PlaceSemiSystematic, SameMemoryAsRankMetric) {
  for (int K = 2; K <= 8; ++K)
    for (int N = 1; N <= K; ++N)
      for (int t = 1; t < K; ++t) {
        const cc::SchemeParams p(N, K, t);
        EXPECT_EQ(p.semi_sum_count() + p.semi_code_length() - p.basis_size(), p.cache_size());
      }
}

TEST(MemoryUsage, ClosedForm) {
  EXPECT_EQ(cc::memory_usage(cc::SchemeParams(3, 6, 3)), cc::Rational(9, 10));
  for (int K = 2; K <= 12; ++K)
    for (int N = 1; N <= K; ++N)
      for (int t = 1; t < K; ++t) {
        const auto expect = oracle::memory(N, K, t);
        const auto got = cc::memory_usage(cc::SchemeParams(N, K, t));
        EXPECT_EQ(got.numerator(), expect.numerator());
        EXPECT_EQ(got.denominator(), expect.denominator());
      }
}

TEST(Variant, NamesRoundTrip) {
  for (auto v : {cc::CacheVariant::RankMetric, cc::CacheVariant::SemiSystematic, cc::CacheVariant::Generic})
    EXPECT_EQ(cc::parse_variant(cc::variant_name(v)), v);
  EXPECT_THROW(cc::parse_variant("systematic"), cc::InvalidParams);
}
