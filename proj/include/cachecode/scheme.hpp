#ifndef CACHECODE_SCHEME_HPP
#define CACHECODE_SCHEME_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cachecode/codes.hpp"
#include "cachecode/combinatorics.hpp"
#include "cachecode/decoder.hpp"
#include "cachecode/delivery.hpp"
#include "cachecode/errors.hpp"
#include "cachecode/finite_field.hpp"
#include "cachecode/placement.hpp"

namespace cachecode {

/// Longest Step-2/3 MDS code any demand can need: C(m, j) + C(m-1, j) over
/// requester counts m in [1, K-N+1] and j in [1, t], where parities exist.
inline std::int64_t max_mds_length(const SchemeParams& p) {
  std::int64_t best = 1;
  for (int m = 1; m <= p.K() - p.N() + 1; ++m)
    for (int j = 1; j <= p.t(); ++j)
      if (binom(m - 1, j) > 0) best = std::max(best, binom(m, j) + binom(m - 1, j));
  return best;
}

/// S(K, N) N!: the number of demands in which every file is requested.
inline std::int64_t generic_field_bound(const SchemeParams& p) { return stirling2(p.K(), p.N()) * factorial(p.N()); }

struct FieldChoice {
  std::uint32_t q = 0;
  int m = 0;
};

/// Smallest compliant field: q covers every MDS length (and exceeds the
/// generic bound for generic caches); m is the code length of the variant.
inline FieldChoice auto_field(const SchemeParams& p, CacheVariant v, std::optional<std::int64_t> q = {},
                             std::optional<int> m = {}) {
  const std::int64_t need = std::max<std::int64_t>(2, max_mds_length(p));
  FieldChoice out;
  if (q) {
    if (!is_prime(*q)) throw CompositeModulus(std::to_string(*q) + " is not prime");
    if (*q < need) throw FieldTooSmall("q = " + std::to_string(*q) + " is below the MDS length " + std::to_string(need));
    out.q = static_cast<std::uint32_t>(*q);
  } else {
    std::int64_t lo = need;
    if (v == CacheVariant::Generic) lo = std::max(lo, generic_field_bound(p) + 1);
    out.q = static_cast<std::uint32_t>(next_prime_at_least(lo));
  }
  const int length = v == CacheVariant::RankMetric       ? p.code_length()
                     : v == CacheVariant::SemiSystematic ? p.semi_code_length()
                                                          : 1;
  if (m) {
    if (*m < length) throw InvalidParams("m = " + std::to_string(*m) + " is below the code length " + std::to_string(length));
    out.m = *m;
  } else {
    out.m = length;
  }
  return out;
}

/// A placed library: field, contents, placement code and every user's cache.
class Scheme {
 public:
  Scheme(SchemeParams params, CacheVariant variant, FieldChoice fc, std::uint64_t seed,
         const std::vector<Matrix<PrimeField>>* encoders = nullptr)
      : params_(params),
        variant_(variant),
        library_(random_library(params, ExtField::with_degree(make_prime_field(fc.q), fc.m, seed), seed)) {
    place(encoders);
  }

  Scheme(Library library, CacheVariant variant, const std::vector<Matrix<PrimeField>>* encoders = nullptr)
      : params_(library.params()), variant_(variant), library_(std::move(library)) {
    place(encoders);
  }

  Scheme(const Scheme&) = delete;
  Scheme& operator=(const Scheme&) = delete;

  const SchemeParams& params() const noexcept { return params_; }
  CacheVariant variant() const noexcept { return variant_; }
  const Library& library() const noexcept { return library_; }
  const ExtField& field() const noexcept { return library_.field(); }
  const RankMetricCode* code() const noexcept { return code_ ? &*code_ : nullptr; }
  const std::vector<UserCache>& caches() const noexcept { return caches_; }
  const UserCache& cache(int k) const { return caches_.at(static_cast<std::size_t>(k - 1)); }
  DecodeContext context() const { return {params_, field(), code()}; }

  /// Cached symbols per user over segments per file.
  Rational measured_memory() const {
    return Rational(static_cast<std::int64_t>(caches_.front().symbols.size()), params_.segments_per_file());
  }

 private:
  void place(const std::vector<Matrix<PrimeField>>* encoders) {
    switch (variant_) {
      case CacheVariant::RankMetric:
        code_.emplace(make_rank_metric_code(params_, field()));
        caches_ = place_rank_metric(library_, *code_);
        break;
      case CacheVariant::SemiSystematic:
        code_.emplace(make_semi_systematic_code(params_, field()));
        caches_ = place_semi_systematic(library_, *code_);
        break;
      case CacheVariant::Generic:
        if (encoders == nullptr) throw InvalidParams("generic placement needs encoding matrices");
        caches_ = place_generic(library_, *encoders);
        break;
    }
  }

  SchemeParams params_;
  CacheVariant variant_;
  Library library_;
  std::optional<RankMetricCode> code_;
  std::vector<UserCache> caches_;
};

/// Outcome of delivering one demand and decoding it at every user.
struct DemandResult {
  Demand demand;
  std::size_t log_size = 0;
  std::vector<UserVerdict> users;
  bool replay_ok = false;

  bool ok() const {
    return replay_ok && std::all_of(users.begin(), users.end(), [](const UserVerdict& v) {
             return v.decoded && v.oracle && v.counts_match && v.block_structure;
           });
  }
};

struct RunOptions {
  bool oracle = true;
  bool blocks = true;
};

inline DemandResult run_demand(const Scheme& s, const Demand& d, RunOptions opt = {}) {
  const auto& p = s.params();
  const auto e = enhance(p, d);
  const auto log = deliver(s.library(), e);
  DemandResult out{d, log.size(), {}, replay_matches(s.library(), log)};
  const auto ctx = s.context();
  for (int k = 1; k <= p.K(); ++k) {
    UserVerdict v;
    v.demand = d;
    v.user = k;
    const auto& cache = s.cache(k);
    const auto sys = collect(p, k, log, cache);
    v.symbols_cached = sys.count(Provenance::Cache);
    v.symbols_received = sys.G.cols() - v.symbols_cached;
    const auto want = expected_collection(p, e, k);
    v.counts_match = static_cast<long>(sys.count(Provenance::Step1)) == want.step1 &&
                     static_cast<long>(sys.count(Provenance::Step2)) == want.step2 &&
                     static_cast<long>(sys.count(Provenance::Step4)) == want.step4 &&
                     static_cast<long>(v.symbols_cached) == want.cached && want.total() == p.basis_size();
    if (opt.blocks) {
      const auto bc = check_block_structure(p, e, sys);
      v.g_rank = bc.rank;
      v.block_structure = bc.ok;
      if (!bc.ok) v.error = "block structure: " + bc.detail;
    } else {
      v.g_rank = rank(sys.G);
      v.block_structure = true;
    }
    try {
      const auto segments = reconstruct_file(ctx, k, e, log, cache);
      const int n0 = d[static_cast<std::size_t>(k - 1)];
      const auto& subsets = s.library().index().subsets();
      bool same = true;
      for (std::size_t i = 0; i < subsets.size(); ++i)
        same = same && segments[i] == s.library().value({n0, subsets[i]});
      v.decoded = same;
      if (!same) v.error = "reconstructed file differs from the library";
    } catch (const Error& ex) {
      v.error = ex.what();
    }
    v.oracle = opt.oracle ? oracle_decodable(p, s.field(), k, d, log, cache) : true;
    out.users.push_back(std::move(v));
  }
  return out;
}

/// Worker count from CACHECODE_WORKERS, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("CACHECODE_WORKERS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on a pool of workers. Rethrows the first
/// exception after all workers finish.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         unsigned workers = worker_count()) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Every demand in `demands`, results in input order.
inline std::vector<DemandResult> run_demands(const Scheme& s, const std::vector<Demand>& demands, RunOptions opt = {}) {
  std::vector<DemandResult> out(demands.size());
  parallel_for(demands.size(), [&](std::size_t i) { out[i] = run_demand(s, demands[i], opt); });
  return out;
}

}  // namespace cachecode

#endif  // CACHECODE_SCHEME_HPP
