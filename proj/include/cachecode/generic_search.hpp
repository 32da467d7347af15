#ifndef CACHECODE_GENERIC_SEARCH_HPP
#define CACHECODE_GENERIC_SEARCH_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cachecode/combinatorics.hpp"
#include "cachecode/decoder.hpp"
#include "cachecode/delivery.hpp"
#include "cachecode/errors.hpp"
#include "cachecode/linalg.hpp"
#include "cachecode/placement.hpp"
#include "cachecode/scheme.hpp"

namespace cachecode {

struct GenericSearchResult {
  std::vector<Matrix<PrimeField>> encoders;  // G_k, P x (P_o - P), one per user
  int attempts = 0;                          // matrices drawn over all users
  std::vector<int> attempts_per_user;
  std::size_t demands_verified = 0;
  std::string warning;
};

inline Matrix<PrimeField> random_matrix(const PrimeField& F, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Matrix<PrimeField> out(F, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.set(r, c, static_cast<PrimeField::Element>(rng() % F.modulus()));
  return out;
}

/// True iff [G_k | collected columns] has rank P for every given delivery plan.
inline bool generic_encoder_valid(const SchemeParams& p, int k, const Matrix<PrimeField>& Gk,
                                  const std::vector<TransmissionLog>& plans) {
  for (const auto& plan : plans) {
    const auto sys = collection_matrix(p, k, plan, Gk);
    if (sys.G.cols() != static_cast<std::size_t>(p.basis_size()) ||
        rank(sys.G) != static_cast<std::size_t>(p.basis_size()))
      return false;
  }
  return true;
}

/// Which demands a generic encoder must serve.
enum class DemandScope { Surjective, All };

/// Draws each user's cache matrix uniformly over GF(q) until it is full rank
/// against every demand in scope. `max_attempts` bounds the draws over all
/// users together. With DemandScope::Surjective only demands requesting every
/// file are checked; degenerate demands swap some uncoded columns and are not
/// covered by that check.
inline GenericSearchResult generic_code_search(const SchemeParams& p, const PrimeField& F, std::uint64_t seed,
                                               int max_attempts = 100, DemandScope scope = DemandScope::Surjective) {
  GenericSearchResult out;
  const auto bound = generic_field_bound(p);
  if (static_cast<std::int64_t>(F.modulus()) <= bound)
    out.warning = "q = " + std::to_string(F.modulus()) + " does not exceed S(K,N)*N! = " + std::to_string(bound) +
                  "; success is not guaranteed";
  if (static_cast<std::int64_t>(F.modulus()) < max_mds_length(p))
    throw FieldTooSmall("q is below the MDS length required by delivery");

  std::vector<TransmissionLog> plans;
  const auto demands =
      scope == DemandScope::All ? all_demand_vectors(p.N(), p.K()) : surjective_demand_vectors(p.N(), p.K());
  for (const auto& d : demands) plans.push_back(plan_delivery(p, F, enhance(p, d)));
  out.demands_verified = plans.size();

  std::mt19937_64 rng(seed);
  const auto P = static_cast<std::size_t>(p.basis_size());
  const auto C = static_cast<std::size_t>(p.cache_size());
  for (int k = 1; k <= p.K(); ++k) {
    int tries = 0;
    while (true) {
      if (out.attempts >= max_attempts)
        throw SearchExhausted("no valid encoder for user " + std::to_string(k) + " within " +
                              std::to_string(max_attempts) + " attempts");
      ++out.attempts;
      ++tries;
      auto Gk = random_matrix(F, P, C, rng);
      if (generic_encoder_valid(p, k, Gk, plans)) {
        out.encoders.push_back(std::move(Gk));
        break;
      }
    }
    out.attempts_per_user.push_back(tries);
  }
  return out;
}

}  // namespace cachecode

#endif  // CACHECODE_GENERIC_SEARCH_HPP
