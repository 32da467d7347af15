#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cachecode/codes.hpp"
#include "cachecode/decoder.hpp"
#include "cachecode/delivery.hpp"
#include "cachecode/linalg.hpp"
#include "cachecode/placement.hpp"
#include "oracles.hpp"

namespace cc = cachecode;
using FMatrix = cc::Matrix<cc::PrimeField>;

namespace {

FMatrix random_matrix(const cc::PrimeField& F, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  FMatrix a(F, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a.set(i, j, static_cast<std::uint32_t>(rng() % F.modulus()));
  return a;
}

std::vector<std::vector<std::int64_t>> to_int(const FMatrix& a) {
  std::vector<std::vector<std::int64_t>> out(a.rows(), std::vector<std::int64_t>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = a.at(i, j);
  return out;
}

}  // namespace

TEST(Rank, IdentityAndZero) {
  const auto F = cc::make_prime_field(5);
  EXPECT_EQ(cc::rank(FMatrix::identity(F, 4)), 4U);
  EXPECT_EQ(cc::rank(FMatrix(F, 3, 5)), 0U);
}

TEST(Rank, AgreesWithReferenceElimination) {
  std::mt19937_64 rng(17);
  for (std::uint32_t q : {2U, 3U, 5U, 7U}) {
    const auto F = cc::make_prime_field(q);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = random_matrix(F, 1 + rng() % 6, 1 + rng() % 6, rng);
      EXPECT_EQ(cc::rank(a), oracle::rank(to_int(a), q));
    }
  }
}

TEST(Rank, DecodingMatrixForAAABUser4) {
  const cc::SchemeParams p(2, 4, 2);
  const auto ext = cc::ExtField::with_degree(cc::make_prime_field(5), p.code_length(), 1);
  const auto lib = cc::random_library(p, ext, 3);
  const auto caches = cc::place_rank_metric(lib);
  const auto log = cc::deliver(lib, cc::Demand{1, 1, 1, 2});
  const auto sys = cc::collect(p, 4, log, caches[3]);
  EXPECT_EQ(sys.G.rows(), 10U);
  EXPECT_EQ(sys.G.cols(), 6U);
  EXPECT_EQ(cc::rank(sys.G), 6U);
  EXPECT_EQ(oracle::rank(to_int(sys.G), 5), 6U);
}

TEST(Solve, IdentitySystem) {
  const auto F = cc::make_prime_field(7);
  const std::vector<std::uint32_t> b{3, 0, 6, 1};
  EXPECT_EQ(cc::solve(FMatrix::identity(F, 4), b), b);
}

TEST(Solve, InconsistentAndSingular) {
  const auto F = cc::make_prime_field(7);
  const std::vector<std::uint32_t> b{1};
  EXPECT_THROW(cc::solve(FMatrix(F, 1, 1), b), cc::Inconsistent);
  FMatrix a(F, 2, 2, {1, 2, 2, 4});
  const std::vector<std::uint32_t> b2{1, 2};
  EXPECT_THROW(cc::solve(a, b2), cc::Singular);
  EXPECT_EQ(cc::multiply(a, std::span<const std::uint32_t>(cc::solve_any(a, b2))), b2);
}

TEST(Solve, RandomSquareSystemsRoundTrip) {
  std::mt19937_64 rng(4);
  const auto F = cc::make_prime_field(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_matrix(F, 5, 5, rng);
    if (oracle::rank(to_int(a), 11) < 5) continue;
    std::vector<std::uint32_t> x(5);
    for (auto& v : x) v = static_cast<std::uint32_t>(rng() % 11);
    const auto b = cc::multiply(a, std::span<const std::uint32_t>(x));
    EXPECT_EQ(cc::solve(a, b), x);
  }
}

TEST(Solve, MooreSystemRecoversPlantedCoefficients) {
  const auto ext = cc::ExtField::with_degree(cc::make_prime_field(5), 12, 2);
  std::mt19937_64 rng(8);
  cc::LinearizedPoly f;
  for (int i = 0; i < 6; ++i) f.coeffs.push_back(ext.random(rng));
  std::vector<cc::ExtElement> points, evals;
  for (int i = 0; i < 6; ++i) {
    points.push_back(ext.alpha_power(static_cast<std::uint64_t>(i)));
    evals.push_back(cc::linearized_eval(ext, f, points.back()));
  }
  const auto M = cc::moore_matrix(ext, points, 6);
  EXPECT_EQ(cc::solve(M, evals), f.coeffs);
}

TEST(RowSpace, MembershipBasics) {
  const auto F = cc::make_prime_field(5);
  FMatrix a(F, 2, 3, {1, 2, 3, 0, 1, 4});
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    EXPECT_TRUE(cc::row_space_contains(a, std::span<const std::uint32_t>(row)));
  }
  FMatrix e1(F, 1, 2, {1, 0});
  const std::vector<std::uint32_t> e2{0, 1};
  EXPECT_FALSE(cc::row_space_contains(e1, std::span<const std::uint32_t>(e2)));
}

TEST(RowSpace, UnitVectorOfDecodedSegment) {
  // A unit vector of a demanded segment lies in the row space of the user's
  // known combinations exactly when the structured decoder succeeds.
  const cc::SchemeParams p(2, 3, 1);
  const auto ext = cc::ExtField::with_degree(cc::make_prime_field(3), p.code_length(), 1);
  const auto lib = cc::random_library(p, ext, 5);
  const auto caches = cc::place_rank_metric(lib);
  for (const auto& d : cc::all_demand_vectors(2, 3)) {
    const auto log = cc::deliver(lib, d);
    for (int k = 1; k <= 3; ++k) EXPECT_TRUE(cc::oracle_decodable(p, ext, k, d, log, caches[static_cast<std::size_t>(k - 1)]));
  }
}

TEST(Stacking, ShapesAndSelection) {
  const auto F = cc::make_prime_field(7);
  FMatrix a(F, 2, 2, {1, 2, 3, 4});
  const auto h = cc::hstack(a, FMatrix::identity(F, 2));
  EXPECT_EQ(h.cols(), 4U);
  EXPECT_EQ(h.at(1, 3), 1U);
  const auto v = cc::vstack(a, a);
  EXPECT_EQ(v.rows(), 4U);
  const std::vector<std::size_t> pick{1};
  EXPECT_EQ(cc::select_rows(a, std::span<const std::size_t>(pick)).row(0), (std::vector<std::uint32_t>{3, 4}));
  EXPECT_EQ(cc::select_columns(a, std::span<const std::size_t>(pick)).column(0), (std::vector<std::uint32_t>{2, 4}));
  EXPECT_THROW(cc::hstack(a, FMatrix(F, 3, 1)), cc::DimensionMismatch);
}
