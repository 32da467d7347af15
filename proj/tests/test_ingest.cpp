#include <filesystem>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cachecode/ingest.hpp"
#include "cachecode/scheme.hpp"

namespace cc = cachecode;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

std::vector<std::vector<cc::ExtElement>> stored_segments(const cc::IngestedFiles& in, int n) {
  std::vector<std::vector<cc::ExtElement>> out;
  for (const auto& lib : in.slices) {
    std::vector<cc::ExtElement> seg;
    for (auto S : lib.index().subsets()) seg.push_back(lib.value({n, S}));
    out.push_back(seg);
  }
  return out;
}

}  // namespace

TEST(Ingest, BitsPerCoefficient) {
  EXPECT_EQ(cc::bits_per_coefficient(cc::make_prime_field(5)), 2);
  EXPECT_EQ(cc::bits_per_coefficient(cc::make_prime_field(17)), 4);
  EXPECT_EQ(cc::bits_per_coefficient(cc::make_prime_field(2)), 1);
}

TEST(Ingest, ReassembleStoredSegments) {
  const cc::SchemeParams p(3, 4, 2);
  const auto ext = cc::ExtField::with_degree(cc::make_prime_field(7), 5, 1);
  std::mt19937_64 rng(1);
  const std::vector<std::vector<std::uint8_t>> files{random_bytes(100, rng), random_bytes(37, rng), {}};
  const auto in = cc::ingest_bytes(p, ext, {"a", "b", "c"}, files);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(cc::reassemble_file(in, n, stored_segments(in, n)), files[static_cast<std::size_t>(n - 1)]);
}

TEST(Ingest, WrongFileCount) {
  const cc::SchemeParams p(2, 3, 1);
  const auto ext = cc::ExtField::with_degree(cc::make_prime_field(5), 3, 1);
  EXPECT_THROW(cc::ingest_bytes(p, ext, {"a"}, {{1, 2, 3}}), cc::InvalidParams);
}

TEST(Ingest, DeliveredBytesRoundTrip) {
  const cc::SchemeParams p(2, 4, 2);
  const auto fc = cc::auto_field(p, cc::CacheVariant::SemiSystematic);
  const auto ext = cc::ExtField::with_degree(cc::make_prime_field(fc.q), fc.m, 4);
  std::mt19937_64 rng(2);
  const std::vector<std::vector<std::uint8_t>> files{random_bytes(61, rng), random_bytes(20, rng)};
  const auto in = cc::ingest_bytes(p, ext, {"x", "y"}, files);
  const cc::Demand d{2, 1, 1, 1};
  const auto e = cc::enhance(p, d);
  std::vector<std::vector<std::vector<cc::ExtElement>>> got(4);
  for (const auto& slice : in.slices) {
    const cc::Scheme s(slice, cc::CacheVariant::SemiSystematic);
    const auto log = cc::deliver(s.library(), e);
    for (int k = 1; k <= 4; ++k) got[static_cast<std::size_t>(k - 1)].push_back(cc::reconstruct_file(s.context(), k, e, log, s.cache(k)));
  }
  for (int k = 1; k <= 4; ++k) {
    const int n = d[static_cast<std::size_t>(k - 1)];
    EXPECT_EQ(cc::reassemble_file(in, n, got[static_cast<std::size_t>(k - 1)]), files[static_cast<std::size_t>(n - 1)]);
  }
}

TEST(Ingest, DirectoryAndSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "cachecode_ingest_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  cc::write_file_bytes(dir / "b.bin", {9, 8, 7});
  cc::write_file_bytes(dir / "a.bin", {1, 2, 3, 4, 5});
  cc::write_file_bytes(dir / "library.json", {'{', '}'});
  const cc::SchemeParams p(2, 3, 1);
  const auto ext = cc::ExtField::with_degree(cc::make_prime_field(5), 3, 1);
  const auto in = cc::ingest_directory(p, ext, dir);
  EXPECT_EQ(in.names, (std::vector<std::string>{"a.bin", "b.bin"}));
  EXPECT_EQ(in.lengths, (std::vector<std::uint64_t>{5, 3}));
  const auto j = cc::sidecar(in, 7, cc::CacheVariant::RankMetric);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("q"), 5);
  EXPECT_EQ(j.at("variant"), "rank-metric");
  std::filesystem::remove_all(dir);
}
