// Two files, four users, t = 2: print the delivery for (A,A,B,B) and decode it.
#include <iostream>

#include "cachecode/cachecode.hpp"

int main() {
  namespace cc = cachecode;
  const cc::SchemeParams p(2, 4, 2);
  const auto fc = cc::auto_field(p, cc::CacheVariant::RankMetric);
  const cc::Scheme scheme(p, cc::CacheVariant::RankMetric, fc, 11);
  const cc::Demand d{1, 1, 2, 2};
  const auto e = cc::enhance(p, d);
  const auto log = cc::deliver(scheme.library(), e);

  std::cout << "q = " << fc.q << ", m = " << fc.m << ", demand " << cc::demand_letters(d) << '\n';
  for (const auto& tx : log) std::cout << "  step " << tx.step << "  " << tx.label << '\n';

  for (int k = 1; k <= p.K(); ++k) {
    const auto got = cc::reconstruct_file(scheme.context(), k, e, log, scheme.cache(k));
    bool same = true;
    const auto subsets = cc::lex_subsets(p.K(), p.t());
    for (std::size_t i = 0; i < subsets.size(); ++i)
      same = same && got[i] == scheme.library().value({d[static_cast<std::size_t>(k - 1)], subsets[i]});
    std::cout << "user " << k << ": " << (same ? "decoded" : "wrong") << '\n';
  }
  std::cout << "(M,R) = (" << cc::to_string(scheme.measured_memory()) << ","
            << cc::to_string(cc::rate(p)) << ")\n";
}
