#ifndef CACHECODE_PLACEMENT_HPP
#define CACHECODE_PLACEMENT_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "cachecode/codes.hpp"
#include "cachecode/combinatorics.hpp"
#include "cachecode/errors.hpp"
#include "cachecode/finite_field.hpp"
#include "cachecode/linalg.hpp"
#include "cachecode/rational.hpp"

namespace cachecode {

/// (N, K, t) with the derived code sizes.
class SchemeParams {
 public:
  SchemeParams(int N, int K, int t) : N_(N), K_(K), t_(t) {
    if (K < 2 || K > 30) throw InvalidParams("K must lie in [2, 30]");
    if (N < 1 || N > K) throw InvalidParams("scheme needs 1 <= N <= K");
    if (t < 1 || t > K - 1) throw InvalidParams("scheme needs 1 <= t <= K-1");
    if (cache_size() != binom(K - 1, t - 1) * N - binom(K - 2, t - 1) * (N - 1))
      throw InvalidParams("cache size identity violated");
  }

  int N() const noexcept { return N_; }
  int K() const noexcept { return K_; }
  int t() const noexcept { return t_; }

  int segments_per_file() const { return static_cast<int>(binom(K_, t_)); }
  /// Segments present at one user: P = C(K-1, t-1) N.
  int basis_size() const { return static_cast<int>(binom(K_ - 1, t_ - 1) * N_); }
  /// P_o = 2 C(K-1, t-1) N - C(K-2, t-1) (N-1).
  int code_length() const {
    return static_cast<int>(2 * binom(K_ - 1, t_ - 1) * N_ - binom(K_ - 2, t_ - 1) * (N_ - 1));
  }
  /// P'_o = C(K-1, t-1) (2N-1) - C(K-2, t-1) (N-1).
  int semi_code_length() const {
    return static_cast<int>(binom(K_ - 1, t_ - 1) * (2 * N_ - 1) - binom(K_ - 2, t_ - 1) * (N_ - 1));
  }
  int cache_size() const { return code_length() - basis_size(); }
  int semi_sum_count() const { return static_cast<int>(binom(K_ - 1, t_ - 1)); }

  bool operator==(const SchemeParams&) const = default;

 private:
  int N_, K_, t_;
};

/// Lexicographic comparison of the sorted member lists.
inline bool lex_less(UserMask a, UserMask b) {
  while (a != b) {
    const UserMask la = a & (~a + 1), lb = b & (~b + 1);
    if (la != lb) {
      if (la == 0) return true;
      if (lb == 0) return false;
      return la < lb;
    }
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

/// Segment W_{n,S}: file n in [1, N], |S| = t.
struct SegmentId {
  int file = 0;
  UserMask users = 0;

  bool operator==(const SegmentId&) const = default;
};

/// Canonical order: ascending file, then lexicographic subset.
inline bool canonical_less(const SegmentId& a, const SegmentId& b) {
  if (a.file != b.file) return a.file < b.file;
  return lex_less(a.users, b.users);
}

inline std::string file_name(int n) {
  if (n >= 1 && n <= 26) return std::string(1, static_cast<char>('A' + n - 1));
  return "W" + std::to_string(n);
}

/// "A_{1,4}".
inline std::string segment_label(const SegmentId& s) {
  std::string out = file_name(s.file) + "_{";
  bool first = true;
  for (int k : members(s.users)) {
    if (!first) out += ',';
    out += std::to_string(k);
    first = false;
  }
  return out + "}";
}

/// "1:1,4" -- the machine-readable id used in exported logs.
inline std::string segment_key(const SegmentId& s) {
  std::string out = std::to_string(s.file) + ":";
  bool first = true;
  for (int k : members(s.users)) {
    if (!first) out += ',';
    out += std::to_string(k);
    first = false;
  }
  return out;
}

/// Dense numbering of all N C(K, t) segments in canonical order.
class SegmentIndex {
 public:
  explicit SegmentIndex(const SchemeParams& p) : N_(p.N()), subsets_(lex_subsets(p.K(), p.t())) {
    for (std::size_t i = 0; i < subsets_.size(); ++i) rank_.emplace(subsets_[i], static_cast<int>(i));
  }

  int size() const noexcept { return N_ * static_cast<int>(subsets_.size()); }
  const std::vector<UserMask>& subsets() const noexcept { return subsets_; }

  int index(const SegmentId& s) const {
    const auto it = rank_.find(s.users);
    if (it == rank_.end() || s.file < 1 || s.file > N_) throw InvalidParams("not a segment of this scheme");
    return (s.file - 1) * static_cast<int>(subsets_.size()) + it->second;
  }
  SegmentId id(int index) const {
    const int per = static_cast<int>(subsets_.size());
    return {index / per + 1, subsets_[static_cast<std::size_t>(index % per)]};
  }

 private:
  int N_;
  std::vector<UserMask> subsets_;
  std::unordered_map<UserMask, int> rank_;
};

/// The N files, one GF(q^m) symbol per segment.
class Library {
 public:
  Library(SchemeParams params, ExtField field, std::vector<ExtElement> values)
      : params_(params), field_(std::move(field)), index_(params_), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != index_.size())
      throw DimensionMismatch("library needs exactly N*C(K,t) segments");
  }

  const SchemeParams& params() const noexcept { return params_; }
  const ExtField& field() const noexcept { return field_; }
  const SegmentIndex& index() const noexcept { return index_; }
  const std::vector<ExtElement>& values() const noexcept { return values_; }
  const ExtElement& value(const SegmentId& s) const { return values_[static_cast<std::size_t>(index_.index(s))]; }

 private:
  SchemeParams params_;
  ExtField field_;
  SegmentIndex index_;
  std::vector<ExtElement> values_;
};

/// Uniform-random segment contents.
inline Library random_library(const SchemeParams& params, const ExtField& field, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SegmentIndex idx(params);
  std::vector<ExtElement> values;
  values.reserve(static_cast<std::size_t>(idx.size()));
  for (int i = 0; i < idx.size(); ++i) values.push_back(field.random(rng));
  return Library(params, field, std::move(values));
}

/// The P segments present at user k: ascending file, then lexicographic S with k in S.
inline std::vector<SegmentId> user_basis(const SchemeParams& params, int k) {
  if (k < 1 || k > params.K()) throw InvalidParams("user index out of range");
  std::vector<SegmentId> out;
  const auto subsets = lex_subsets(params.K(), params.t());
  for (int n = 1; n <= params.N(); ++n)
    for (UserMask s : subsets)
      if (has_user(s, k)) out.push_back({n, s});
  return out;
}

enum class CacheVariant { RankMetric, SemiSystematic, Generic };

inline std::string variant_name(CacheVariant v) {
  switch (v) {
    case CacheVariant::RankMetric: return "rank-metric";
    case CacheVariant::SemiSystematic: return "semi-systematic";
    case CacheVariant::Generic: return "generic";
  }
  return "unknown";
}

inline CacheVariant parse_variant(const std::string& s) {
  if (s == "rank-metric") return CacheVariant::RankMetric;
  if (s == "semi-systematic") return CacheVariant::SemiSystematic;
  if (s == "generic") return CacheVariant::Generic;
  throw InvalidParams("unknown cache variant '" + s + "'");
}

/// Contents of one user's cache.
///
/// `coeff_matrix` maps codeword positions to cached symbols: the user's
/// codeword is its P basis symbols followed by the code's parities (for the
/// generic variant the codeword is just the basis), and
/// symbols = codeword * coeff_matrix. `segment_rows` expresses the same
/// symbols directly over the basis, with GF(q^m) coefficients.
struct UserCache {
  int user = 0;
  CacheVariant variant = CacheVariant::RankMetric;
  std::vector<ExtElement> symbols;
  Matrix<PrimeField> coeff_matrix;
  Matrix<ExtField> segment_rows;
};

namespace detail {

inline std::vector<ExtElement> basis_values(const Library& lib, const std::vector<SegmentId>& basis) {
  std::vector<ExtElement> out;
  out.reserve(basis.size());
  for (const auto& s : basis) out.push_back(lib.value(s));
  return out;
}

inline void check_cache(const ExtField& ext, const UserCache& c, const std::vector<ExtElement>& codeword,
                        const std::vector<ExtElement>& basis) {
  if (combine_columns(ext, codeword, c.coeff_matrix) != c.symbols)
    throw Error("placement: coefficient matrix does not reproduce the cached symbols");
  if (multiply(c.segment_rows, std::span<const ExtElement>(basis)) != c.symbols)
    throw Error("placement: segment rows do not reproduce the cached symbols");
}

}  // namespace detail

inline RankMetricCode make_rank_metric_code(const SchemeParams& p, const ExtField& ext) {
  return RankMetricCode(ext, p.basis_size(), p.code_length());
}

inline RankMetricCode make_semi_systematic_code(const SchemeParams& p, const ExtField& ext) {
  return RankMetricCode(ext, p.basis_size(), p.semi_code_length());
}

/// Each user caches the P_o - P parities of its basis under C(P_o, P).
inline std::vector<UserCache> place_rank_metric(const Library& lib, const RankMetricCode& code) {
  const auto& p = lib.params();
  const ExtField& ext = lib.field();
  const PrimeField& F = ext.base();
  if (code.dimension() != p.basis_size() || code.length() != p.code_length())
    throw InvalidParams("rank-metric code does not match the scheme parameters");
  const auto P = static_cast<std::size_t>(code.dimension());
  const auto R = static_cast<std::size_t>(code.parity_count());
  std::vector<UserCache> caches;
  for (int k = 1; k <= p.K(); ++k) {
    const auto basis = detail::basis_values(lib, user_basis(p, k));
    auto codeword = rank_metric_systematic_encode(code, basis);
    Matrix<PrimeField> sel(F, P + R, R);
    for (std::size_t j = 0; j < R; ++j) sel.set(P + j, j, 1);
    UserCache c{k, CacheVariant::RankMetric, {codeword.begin() + static_cast<std::ptrdiff_t>(P), codeword.end()},
                std::move(sel), code.parity_map()};
    detail::check_cache(ext, c, codeword, basis);
    caches.push_back(std::move(c));
  }
  return caches;
}

inline std::vector<UserCache> place_rank_metric(const Library& lib) {
  return place_rank_metric(lib, make_rank_metric_code(lib.params(), lib.field()));
}

/// Each user caches sum_n W_{n,S} for every S containing it, then the
/// P'_o - P parities of its basis under C(P'_o, P).
inline std::vector<UserCache> place_semi_systematic(const Library& lib, const RankMetricCode& code) {
  const auto& p = lib.params();
  const ExtField& ext = lib.field();
  const PrimeField& F = ext.base();
  if (code.dimension() != p.basis_size() || code.length() != p.semi_code_length())
    throw InvalidParams("semi-systematic code does not match the scheme parameters");
  const auto P = static_cast<std::size_t>(code.dimension());
  const auto R = static_cast<std::size_t>(code.parity_count());
  const auto sums = static_cast<std::size_t>(p.semi_sum_count());
  std::vector<UserCache> caches;
  for (int k = 1; k <= p.K(); ++k) {
    const auto ids = user_basis(p, k);
    const auto basis = detail::basis_values(lib, ids);
    const auto codeword = rank_metric_systematic_encode(code, basis);
    Matrix<PrimeField> coeff(F, P + R, sums + R);
    Matrix<ExtField> rows(ext, sums + R, P);
    std::vector<ExtElement> symbols;
    // basis order is file-major, so position (n-1)*sums + s holds W_{n, S_s}
    for (std::size_t s = 0; s < sums; ++s) {
      ExtElement acc = ext.zero();
      for (int n = 0; n < p.N(); ++n) {
        const std::size_t pos = static_cast<std::size_t>(n) * sums + s;
        coeff.set(pos, s, 1);
        rows.set(s, pos, ext.one());
        acc = ext.add(acc, basis[pos]);
      }
      symbols.push_back(std::move(acc));
    }
    for (std::size_t j = 0; j < R; ++j) {
      coeff.set(P + j, sums + j, 1);
      for (std::size_t i = 0; i < P; ++i) rows.set(sums + j, i, code.parity_map().at(j, i));
      symbols.push_back(codeword[P + j]);
    }
    UserCache c{k, CacheVariant::SemiSystematic, std::move(symbols), std::move(coeff), std::move(rows)};
    detail::check_cache(ext, c, codeword, basis);
    caches.push_back(std::move(c));
  }
  return caches;
}

inline std::vector<UserCache> place_semi_systematic(const Library& lib) {
  return place_semi_systematic(lib, make_semi_systematic_code(lib.params(), lib.field()));
}

/// Each user k caches basis * G_k with G_k a P x (P_o - P) matrix over GF(q).
inline std::vector<UserCache> place_generic(const Library& lib, const std::vector<Matrix<PrimeField>>& encoders) {
  const auto& p = lib.params();
  const ExtField& ext = lib.field();
  if (static_cast<int>(encoders.size()) != p.K()) throw InvalidParams("need one encoding matrix per user");
  std::vector<UserCache> caches;
  for (int k = 1; k <= p.K(); ++k) {
    const auto& G = encoders[static_cast<std::size_t>(k - 1)];
    if (G.rows() != static_cast<std::size_t>(p.basis_size()) || G.cols() != static_cast<std::size_t>(p.cache_size()))
      throw DimensionMismatch("generic encoder must be P x (P_o - P)");
    if (!(G.field() == ext.base())) throw FieldMismatch("generic encoder is over a different base field");
    const auto basis = detail::basis_values(lib, user_basis(p, k));
    UserCache c{k, CacheVariant::Generic, combine_columns(ext, basis, G), G, embed(ext, G.transpose())};
    detail::check_cache(ext, c, basis, basis);
    caches.push_back(std::move(c));
  }
  return caches;
}

/// Cache size in file units: (P_o - P) / C(K, t) = t[(N-1)t + K - N] / (K(K-1)).
inline Rational memory_usage(const SchemeParams& p) {
  return Rational(p.cache_size(), p.segments_per_file());
}

}  // namespace cachecode

#endif  // CACHECODE_PLACEMENT_HPP
