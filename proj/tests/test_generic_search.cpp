#include <vector>

#include <gtest/gtest.h>

#include "cachecode/generic_search.hpp"
#include "cachecode/scheme.hpp"
#include "oracles.hpp"

namespace cc = cachecode;

namespace {

/// Every user reaches rank P against every surjective demand, recomputed from scratch.
bool verified(const cc::SchemeParams& p, const cc::PrimeField& F, const std::vector<cc::Matrix<cc::PrimeField>>& enc) {
  for (const auto& d : cc::surjective_demand_vectors(p.N(), p.K())) {
    const auto plan = cc::plan_delivery(p, F, cc::enhance(p, d));
    for (int k = 1; k <= p.K(); ++k) {
      const auto sys = cc::collection_matrix(p, k, plan, enc[static_cast<std::size_t>(k - 1)]);
      std::vector<std::vector<std::int64_t>> rows(sys.G.rows(), std::vector<std::int64_t>(sys.G.cols()));
      for (std::size_t i = 0; i < sys.G.rows(); ++i)
        for (std::size_t j = 0; j < sys.G.cols(); ++j) rows[i][j] = sys.G.at(i, j);
      if (sys.G.cols() != static_cast<std::size_t>(p.basis_size()) ||
          oracle::rank(rows, F.modulus()) != static_cast<std::size_t>(p.basis_size()))
        return false;
    }
  }
  return true;
}

}  // namespace

TEST(FieldBound, StirlingTimesFactorial) {
  EXPECT_EQ(cc::generic_field_bound(cc::SchemeParams(2, 3, 1)), 6);
  EXPECT_EQ(cc::generic_field_bound(cc::SchemeParams(2, 4, 2)), 14);
  EXPECT_EQ(cc::auto_field(cc::SchemeParams(2, 4, 2), cc::CacheVariant::Generic).q, 17U);
  EXPECT_EQ(cc::auto_field(cc::SchemeParams(2, 3, 1), cc::CacheVariant::Generic).q, 7U);
}

TEST(GenericSearch, TwoThreeOne) {
  const cc::SchemeParams p(2, 3, 1);
  for (std::uint32_t q : {7U, 17U}) {
    const auto F = cc::make_prime_field(q);
    const auto res = cc::generic_code_search(p, F, 1, 100);
    EXPECT_EQ(res.encoders.size(), 3U);
    EXPECT_EQ(res.demands_verified, 6U);
    EXPECT_LE(res.attempts, 100);
    EXPECT_TRUE(res.warning.empty());
    EXPECT_TRUE(verified(p, F, res.encoders));
  }
}

TEST(GenericSearch, TwoFourTwo) {
  const cc::SchemeParams p(2, 4, 2);
  const auto F = cc::make_prime_field(17);
  const auto res = cc::generic_code_search(p, F, 1, 100);
  EXPECT_EQ(res.demands_verified, 14U);
  EXPECT_LE(res.attempts, 100);
  EXPECT_TRUE(verified(p, F, res.encoders));
}

TEST(GenericSearch, SmallFieldNeverReturnsUnverified) {
  const cc::SchemeParams p(2, 4, 2);
  for (std::uint32_t q : {2U, 5U, 7U}) {
    const auto F = cc::make_prime_field(q);
    try {
      const auto res = cc::generic_code_search(p, F, 3, 100);
      EXPECT_FALSE(res.warning.empty());
      EXPECT_TRUE(verified(p, F, res.encoders));
    } catch (const cc::SearchExhausted&) {
    } catch (const cc::FieldTooSmall&) {
    }
  }
}

TEST(GenericSearch, TinyBudgetExhausts) {
  const cc::SchemeParams p(2, 4, 2);
  EXPECT_THROW(cc::generic_code_search(p, cc::make_prime_field(17), 1, 3), cc::SearchExhausted);
}

TEST(GenericSearch, EncodersDecodeSurjectiveDemands) {
  const cc::SchemeParams p(2, 4, 2);
  const cc::FieldChoice fc = cc::auto_field(p, cc::CacheVariant::Generic);
  const auto res = cc::generic_code_search(p, cc::make_prime_field(fc.q), 2, 100);
  const cc::Scheme s(p, cc::CacheVariant::Generic, fc, 2, &res.encoders);
  cc::RunOptions opt;
  opt.blocks = false;
  for (const auto& d : cc::surjective_demand_vectors(2, 4)) EXPECT_TRUE(cc::run_demand(s, d, opt).ok()) << cc::demand_string(d);
}

TEST(GenericSearch, AllScopeCoversDegenerateDemands) {
  const cc::SchemeParams p(2, 4, 2);
  const cc::FieldChoice fc = cc::auto_field(p, cc::CacheVariant::Generic);
  const auto res = cc::generic_code_search(p, cc::make_prime_field(fc.q), 1, 1000, cc::DemandScope::All);
  EXPECT_EQ(res.demands_verified, 16U);
  const cc::Scheme s(p, cc::CacheVariant::Generic, fc, 1, &res.encoders);
  cc::RunOptions opt;
  opt.blocks = false;
  for (const auto& d : cc::all_demand_vectors(2, 4)) EXPECT_TRUE(cc::run_demand(s, d, opt).ok()) << cc::demand_string(d);
}
