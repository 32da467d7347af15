#include <vector>

#include <gtest/gtest.h>

#include "cachecode/worked_examples.hpp"

namespace cc = cachecode;

TEST(Fixture2x4, ParseRow) {
  const auto F = cc::make_prime_field(5);
  const auto row = cc::fixture_2x4::parse_row(F, "A3+2A5+3B6");
  EXPECT_EQ(row, (std::vector<std::uint32_t>{0, 0, 1, 0, 2, 0, 0, 0, 0, 0, 0, 3}));
  EXPECT_THROW(cc::fixture_2x4::parse_row(F, "C1"), cc::FormatError);
  EXPECT_THROW(cc::fixture_2x4::parse_row(F, "A7"), cc::FormatError);
}

TEST(Fixture2x4, EveryUserDecodesPrintedTransmissions) {
  for (const auto& c : cc::fixture_2x4::cases())
    for (int k = 1; k <= 4; ++k)
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        std::string why;
        EXPECT_TRUE(cc::fixture_2x4::user_decodes(c, k, seed, &why)) << cc::demand_letters(c.demand) << " user " << k << ": " << why;
      }
}

TEST(Fixture2x4, DroppingATransmissionBreaksSomeUser) {
  for (const auto& c : cc::fixture_2x4::cases())
    for (std::size_t drop = 0; drop < c.transmissions.size(); ++drop) {
      auto reduced = c;
      reduced.transmissions.erase(reduced.transmissions.begin() + static_cast<std::ptrdiff_t>(drop));
      bool some_fail = false;
      for (int k = 1; k <= 4; ++k) some_fail = some_fail || !cc::fixture_2x4::user_decodes(reduced, k, 1);
      EXPECT_TRUE(some_fail) << cc::demand_letters(c.demand) << " without " << c.transmissions[drop];
    }
}

TEST(Fixture3x4, PrintedListsMatchDelivery) {
  const cc::SchemeParams p(3, 4, 2);
  const auto fc = cc::auto_field(p, cc::CacheVariant::SemiSystematic);
  const auto lib = cc::random_library(p, cc::ExtField::with_degree(cc::make_prime_field(fc.q), fc.m, 1), 1);
  for (const auto& c : cc::fixture_3x4::cases()) {
    const auto e = cc::enhance(p, c.demand);
    EXPECT_EQ(cc::printed_form(p, e, cc::deliver(lib, e)), c.steps) << cc::demand_letters(c.demand);
  }
}

TEST(Reproduce, AllExamplesPass) {
  for (const char* name : {"2x4", "3x4", "3x6"}) {
    const auto rep = cc::reproduce_example(name);
    EXPECT_TRUE(rep.ok()) << name;
    for (const auto& check : rep.checks) EXPECT_TRUE(check.ok) << name << ": " << check.name << ": " << check.detail;
  }
}

TEST(Reproduce, UnknownName) { EXPECT_THROW(cc::reproduce_example("5x5"), cc::UnknownExample); }
