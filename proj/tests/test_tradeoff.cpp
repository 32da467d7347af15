#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "cachecode/delivery.hpp"
#include "cachecode/placement.hpp"
#include "cachecode/tradeoff.hpp"
#include "oracles.hpp"

namespace cc = cachecode;
using cc::Rational;

namespace {

std::vector<cc::TradeoffPoint> landscape(int N, int K) {
  auto pts = cc::interference_elimination_points(N, K);
  const auto base = cc::uncoded_placement_points(N, K);
  pts.insert(pts.end(), base.begin(), base.end());
  return pts;
}

bool has_vertex(const std::vector<cc::TradeoffPoint>& hull, Rational M, Rational R) {
  for (const auto& p : hull)
    if (p.M == M && p.R == R) return true;
  return false;
}

}  // namespace

TEST(InterferenceElimination, TwoFourPoints) {
  const auto pts = cc::interference_elimination_points(2, 4);
  ASSERT_EQ(pts.size(), 5U);
  EXPECT_EQ(pts[0].M, Rational(0));
  EXPECT_EQ(pts[0].R, Rational(2));
  EXPECT_EQ(pts[1].M, Rational(1, 4));
  EXPECT_EQ(pts[1].R, Rational(3, 2));
  EXPECT_EQ(pts[2].M, Rational(2, 3));
  EXPECT_EQ(pts[2].R, Rational(1));
  EXPECT_EQ(pts[4].M, Rational(2));
  EXPECT_EQ(pts[4].R, Rational(0));
  EXPECT_THROW(cc::interference_elimination_points(3, 2), cc::InvalidParams);
}

TEST(InterferenceElimination, TOneMatchesSingleSegmentPoint) {
  for (int K = 1; K <= 8; ++K)
    for (int N = 1; N <= K; ++N) {
      const auto pts = cc::interference_elimination_points(N, K);
      EXPECT_EQ(pts[1].M, Rational(1, K));
      EXPECT_EQ(pts[1].R, Rational(N * (K - 1), K));
    }
}

TEST(InterferenceElimination, MatchesMeasuredSchemeQuantities) {
  for (int K = 2; K <= 8; ++K)
    for (int N = 1; N <= K; ++N) {
      const auto pts = cc::interference_elimination_points(N, K);
      for (int t = 1; t < K; ++t) {
        const cc::SchemeParams p(N, K, t);
        EXPECT_EQ(pts[static_cast<std::size_t>(t)].M, cc::memory_usage(p));
        EXPECT_EQ(pts[static_cast<std::size_t>(t)].R, cc::rate(p));
      }
    }
}

TEST(UncodedPlacement, TwoFourValues) {
  const auto pts = cc::uncoded_placement_points(2, 4);
  ASSERT_EQ(pts.size(), 5U);
  EXPECT_EQ(pts[1].M, Rational(1, 2));
  EXPECT_EQ(pts[1].R, Rational(3, 2));
  EXPECT_EQ(pts[0].R, Rational(2));
  EXPECT_EQ(pts[4].R, Rational(0));
}

TEST(Envelope, TwoFourVertices) {
  const auto hull = cc::lower_convex_envelope(landscape(2, 4));
  EXPECT_TRUE(has_vertex(hull, 0, 2));
  EXPECT_TRUE(has_vertex(hull, Rational(1, 4), Rational(3, 2)));
  EXPECT_TRUE(has_vertex(hull, Rational(2, 3), 1));
  EXPECT_TRUE(has_vertex(hull, 2, 0));
  EXPECT_FALSE(has_vertex(hull, Rational(1, 2), Rational(3, 2)));
  EXPECT_TRUE(cc::strictly_above_envelope(hull, Rational(1, 2), Rational(3, 2)));
}

TEST(Envelope, FourTwentyBoundaryPoint) {
  const auto hull = cc::lower_convex_envelope(landscape(4, 20));
  EXPECT_TRUE(cc::on_envelope(hull, Rational(259, 380), Rational(13, 5)));
}

TEST(Envelope, SinglePoint) {
  const std::vector<cc::TradeoffPoint> one{{Rational(1, 3), Rational(2), "x"}};
  const auto hull = cc::lower_convex_envelope(one);
  ASSERT_EQ(hull.size(), 1U);
  EXPECT_EQ(hull[0].M, Rational(1, 3));
  EXPECT_THROW(cc::lower_convex_envelope({}), cc::InvalidParams);
}

TEST(Envelope, MatchesExhaustiveHull) {
  for (int K = 1; K <= 12; ++K)
    for (int N = 1; N <= K; ++N) {
      const auto pts = landscape(N, K);
      std::vector<std::pair<oracle::Q, oracle::Q>> raw;
      for (const auto& p : pts) raw.emplace_back(p.M, p.R);
      const auto want = oracle::lower_hull(raw);
      const auto got = cc::lower_convex_envelope(pts);
      ASSERT_EQ(got.size(), want.size()) << N << ',' << K;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].M, want[i].first);
        EXPECT_EQ(got[i].R, want[i].second);
      }
    }
}

TEST(Envelope, MonotoneAndConvex) {
  for (int K = 2; K <= 10; ++K)
    for (int N = 1; N <= K; ++N) {
      const auto hull = cc::lower_convex_envelope(landscape(N, K));
      for (std::size_t i = 1; i < hull.size(); ++i) {
        EXPECT_LT(hull[i - 1].M, hull[i].M);
        EXPECT_GE(hull[i - 1].R, hull[i].R);
      }
      for (std::size_t i = 2; i < hull.size(); ++i) {
        const Rational s1 = (hull[i - 1].R - hull[i - 2].R) / (hull[i - 1].M - hull[i - 2].M);
        const Rational s2 = (hull[i].R - hull[i - 1].R) / (hull[i].M - hull[i - 1].M);
        EXPECT_GT(s2, s1);
      }
    }
}

TEST(Csv, EmptyListIsHeaderOnly) {
  std::ostringstream os;
  cc::write_csv({}, os);
  EXPECT_EQ(os.str(), std::string(cc::kCsvHeader) + "\n");
}

TEST(Csv, RowCountAndRoundTrip) {
  const auto pts = cc::interference_elimination_points(2, 4);
  const auto path = std::filesystem::temp_directory_path() / "cachecode_tradeoff_test.csv";
  cc::export_csv(pts, path.string());
  std::ifstream is(path);
  const auto back = cc::parse_csv(is);
  EXPECT_EQ(back, pts);
  std::ifstream again(path);
  std::string line;
  int lines = 0;
  while (std::getline(again, line)) ++lines;
  EXPECT_EQ(lines, 6);
  std::filesystem::remove(path);
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream bad_header("M,R\n");
  EXPECT_THROW(cc::parse_csv(bad_header), cc::FormatError);
  std::istringstream short_row(std::string(cc::kCsvHeader) + "\n1,2,3\n");
  EXPECT_THROW(cc::parse_csv(short_row), cc::FormatError);
}

TEST(Csv, OneOneHasTwoPoints) {
  const auto pts = cc::interference_elimination_points(1, 1);
  ASSERT_EQ(pts.size(), 2U);
  EXPECT_EQ(pts[0].R, Rational(1));
  EXPECT_EQ(pts[1].M, Rational(1));
}
