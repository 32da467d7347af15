// Lower convex envelope of the achievable points for N = 2, K = 4.
#include <iostream>

#include "cachecode/tradeoff.hpp"

int main() {
  namespace cc = cachecode;
  auto pts = cc::interference_elimination_points(2, 4);
  const auto base = cc::uncoded_placement_points(2, 4);
  pts.insert(pts.end(), base.begin(), base.end());
  cc::write_csv(cc::lower_convex_envelope(pts), std::cout);
}
