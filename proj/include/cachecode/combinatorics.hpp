#ifndef CACHECODE_COMBINATORICS_HPP
#define CACHECODE_COMBINATORICS_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "cachecode/errors.hpp"

namespace cachecode {

/// Binomial coefficient with the conventions the counting identities rely on:
/// C(n, 0) = 1 for every n, C(n, k) = 0 for k < 0, and C(n, k) = 0 when n < k.
inline std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (k < 0) return 0;
  if (k == 0) return 1;
  if (n < k) return 0;
  if (k > n - k) k = n - k;
  // exact: the running product is always C(n - k + i, i)
  __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::int64_t>(r);
}

inline std::int64_t factorial(std::int64_t n) {
  std::int64_t r = 1;
  for (std::int64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Stirling number of the second kind from the alternating-sum closed form.
inline std::int64_t stirling2(std::int64_t K, std::int64_t N) {
  if (N < 1 || K < N) throw InvalidParams("stirling2 requires K >= N >= 1");
  __int128 sum = 0;
  for (std::int64_t j = 1; j <= N; ++j) {
    __int128 term = binom(N, j);
    for (std::int64_t e = 0; e < K; ++e) term *= j;
    sum += ((N - j) % 2 == 0) ? term : -term;
  }
  return static_cast<std::int64_t>(sum / factorial(N));
}

/// A set of users {1..K}, bit (k-1) set for user k. K <= 32.
using UserMask = std::uint32_t;

inline constexpr UserMask user_bit(int k) { return UserMask{1} << (k - 1); }
inline constexpr UserMask all_users(int K) {
  return K >= 32 ? ~UserMask{0} : (UserMask{1} << K) - 1;
}
inline constexpr bool has_user(UserMask s, int k) { return (s & user_bit(k)) != 0; }
inline int set_size(UserMask s) { return std::popcount(s); }

inline std::vector<int> members(UserMask s) {
  std::vector<int> out;
  for (int k = 1; s != 0; ++k, s >>= 1)
    if (s & 1U) out.push_back(k);
  return out;
}

/// "{1,4}" style rendering.
inline std::string set_string(UserMask s) {
  std::string out = "{";
  bool first = true;
  for (int k : members(s)) {
    if (!first) out += ',';
    out += std::to_string(k);
    first = false;
  }
  return out + "}";
}

/// All size-r subsets of `universe`, in lexicographic order of their sorted member lists.
inline std::vector<UserMask> subsets_of(UserMask universe, int r) {
  std::vector<UserMask> out;
  const std::vector<int> pool = members(universe);
  const int n = static_cast<int>(pool.size());
  if (r < 0 || r > n) return out;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    UserMask s = 0;
    for (int i : idx) s |= user_bit(pool[i]);
    out.push_back(s);
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// Size-r subsets of {1..K} in lexicographic order.
inline std::vector<UserMask> lex_subsets(int K, int r) { return subsets_of(all_users(K), r); }

/// Every demand vector in [1,N]^K, first user varying slowest.
inline std::vector<std::vector<int>> all_demand_vectors(int N, int K) {
  std::vector<std::vector<int>> out;
  std::vector<int> d(K, 1);
  while (true) {
    out.push_back(d);
    int i = K - 1;
    while (i >= 0 && d[i] == N) d[i--] = 1;
    if (i < 0) break;
    ++d[i];
  }
  return out;
}

/// Demand vectors in which every file is requested by someone.
inline std::vector<std::vector<int>> surjective_demand_vectors(int N, int K) {
  std::vector<std::vector<int>> out;
  for (auto& d : all_demand_vectors(N, K)) {
    std::vector<bool> seen(N + 1, false);
    for (int f : d) seen[f] = true;
    bool all = true;
    for (int n = 1; n <= N; ++n) all = all && seen[n];
    if (all) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace cachecode

#endif  // CACHECODE_COMBINATORICS_HPP
