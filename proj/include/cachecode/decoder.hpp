#ifndef CACHECODE_DECODER_HPP
#define CACHECODE_DECODER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "cachecode/codes.hpp"
#include "cachecode/combinatorics.hpp"
#include "cachecode/delivery.hpp"
#include "cachecode/errors.hpp"
#include "cachecode/linalg.hpp"
#include "cachecode/placement.hpp"

namespace cachecode {

enum class Provenance { Cache, Step1, Step2, Step4 };

inline std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Cache: return "cache";
    case Provenance::Step1: return "step1";
    case Provenance::Step2: return "step2";
    case Provenance::Step4: return "step4";
  }
  return "unknown";
}

/// The P combinations user k feeds to interference elimination.
///
/// Rows of G index codeword positions: the P basis symbols in canonical order
/// followed by the code's parities (no parities for the generic variant).
/// Column j satisfies values[j] = codeword * G[:, j].
struct CollectedSystem {
  int user = 0;
  CacheVariant variant = CacheVariant::RankMetric;
  std::vector<SegmentId> basis;
  Matrix<PrimeField> G;
  std::vector<ExtElement> values;
  std::vector<Provenance> provenance;
  std::vector<long> log_index;  // -1 for cached symbols

  std::size_t count(Provenance p) const {
    return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), p));
  }
};

/// Symbols user k takes from the log: uncoded Step-1/4 segments it holds and
/// Step-2 parities whose class contains it. Step-3 parities are never used here.
inline bool collected_by(const Transmission& tx, int k) {
  switch (tx.step) {
    case 1:
    case 2:
    case 4: return has_user(tx.group, k);
    default: return false;
  }
}

/// G, provenance and log positions of the combinations user k collects,
/// with the cache's coefficient matrix supplying the leading columns.
inline CollectedSystem collection_matrix(const SchemeParams& p, int k, const TransmissionLog& log,
                                         const Matrix<PrimeField>& cache_coeffs) {
  const auto basis = user_basis(p, k);
  const SegmentIndex index(p);
  std::unordered_map<int, std::size_t> position;
  for (std::size_t i = 0; i < basis.size(); ++i) position.emplace(index.index(basis[i]), i);

  const PrimeField& F = cache_coeffs.field();
  const std::size_t rows = cache_coeffs.rows();
  std::vector<std::vector<PrimeField::Element>> columns;
  CollectedSystem sys{k, CacheVariant::RankMetric, basis, Matrix<PrimeField>(F, rows, 0), {}, {}, {}};
  for (std::size_t j = 0; j < cache_coeffs.cols(); ++j) {
    columns.push_back(cache_coeffs.column(j));
    sys.provenance.push_back(Provenance::Cache);
    sys.log_index.push_back(-1);
  }
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& tx = log[i];
    if (!collected_by(tx, k)) continue;
    std::vector<PrimeField::Element> col(rows, 0);
    for (const auto& [seg, c] : tx.coeffs) {
      const auto it = position.find(index.index(seg));
      if (it == position.end()) throw Error("collected symbol " + tx.label + " leaves the user's basis");
      col[it->second] = F.add(col[it->second], c);
    }
    columns.push_back(std::move(col));
    sys.provenance.push_back(tx.step == 1 ? Provenance::Step1 : tx.step == 2 ? Provenance::Step2 : Provenance::Step4);
    sys.log_index.push_back(static_cast<long>(i));
  }
  Matrix<PrimeField> G(F, rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t r = 0; r < rows; ++r)
      if (columns[j][r] != 0) G.set(r, j, columns[j][r]);
  sys.G = std::move(G);
  return sys;
}

inline CollectedSystem collect(const SchemeParams& p, int k, const TransmissionLog& log, const UserCache& cache) {
  if (cache.user != k) throw InvalidParams("cache belongs to a different user");
  auto sys = collection_matrix(p, k, log, cache.coeff_matrix);
  sys.variant = cache.variant;
  for (long i : sys.log_index)
    sys.values.push_back(i < 0 ? cache.symbols[sys.values.size()] : log[static_cast<std::size_t>(i)].value);
  return sys;
}

/// Predicted collection sizes for user k.
struct CollectionCounts {
  long step1 = 0;
  long step2 = 0;
  long step4 = 0;
  long cached = 0;

  long total() const { return step1 + step2 + step4 + cached; }
};

/// Step 1 and 2 sum over requested files the user is outside of (enhanced
/// sets); Step 4 gives C(K-2, t-1) per substitute file whose user is not k.
inline CollectionCounts expected_collection(const SchemeParams& p, const EnhancedDemand& e, int k) {
  const int K = p.K(), t = p.t();
  CollectionCounts c;
  c.cached = p.cache_size();
  for (int n : e.requested) {
    if (has_user(e.set_of(n), k)) continue;
    const int m = e.count_of(n);
    c.step1 += binom(K - m - 1, t - 1);
    for (int j = std::max(1, t - m); j <= std::min(t - 1, K - m); ++j)
      c.step2 += binom(K - m - 1, j - 1) * binom(m - 1, t - j);
  }
  for (const auto& [n, user] : e.u)
    if (user != k) c.step4 += binom(K - 2, t - 1);
  return c;
}

/// Recovers the P basis symbols through the placement code. Throws
/// RankDeficient when G has rank < P.
inline std::vector<ExtElement> eliminate_interference(const CollectedSystem& sys, const RankMetricCode& code) {
  if (sys.variant == CacheVariant::Generic) throw InvalidParams("generic caches have no rank-metric code");
  return rank_metric_decode(code, sys.G, sys.values);
}

/// Generic variant: solves the P x P system over the basis directly.
inline std::vector<ExtElement> eliminate_interference_generic(const CollectedSystem& sys, const ExtField& ext) {
  const auto P = sys.basis.size();
  const std::size_t r = rank(sys.G);
  if (sys.G.cols() != P || r < P)
    throw RankDeficient("combination matrix has rank " + std::to_string(r) + ", need " + std::to_string(P));
  return solve(embed(ext, sys.G.transpose()), sys.values);
}

/// Everything a decoder needs besides the log and the user's cache.
struct DecodeContext {
  SchemeParams params;
  ExtField field;
  const RankMetricCode* code = nullptr;  // null for the generic variant
};

/// All C(K, t) segments of user k's file, in lexicographic subset order.
inline std::vector<ExtElement> reconstruct_file(const DecodeContext& ctx, int k, const EnhancedDemand& e,
                                                const TransmissionLog& log, const UserCache& cache) {
  const auto& p = ctx.params;
  const int n0 = e.original.at(static_cast<std::size_t>(k - 1));
  const auto sys = collect(p, k, log, cache);
  if (sys.variant != CacheVariant::Generic && ctx.code == nullptr)
    throw InvalidParams("rank-metric decode needs the placement code");
  const auto basis_values = sys.variant == CacheVariant::Generic ? eliminate_interference_generic(sys, ctx.field)
                                                                 : eliminate_interference(sys, *ctx.code);

  std::map<UserMask, ExtElement> known;  // segments of n0 by subset
  for (std::size_t i = 0; i < sys.basis.size(); ++i)
    if (sys.basis[i].file == n0) known.emplace(sys.basis[i].users, basis_values[i]);
  for (const auto& tx : log)
    if (tx.uncoded() && tx.file == n0) known.emplace(tx.group, tx.value);

  const UserMask req = e.set_of(n0);
  const UserMask outside = all_users(p.K()) & ~req;
  const int m = set_size(req);
  const PrimeField& F = ctx.field.base();
  const auto subsets = lex_subsets(p.K(), p.t());
  for (UserMask S : subsets) {
    if (known.contains(S)) continue;
    const UserMask A = S & outside;
    const int j = p.t() - set_size(A);
    if (j == 0) throw MissingSymbols("uncoded segment " + segment_label({n0, S}) + " was not received");
    const auto members = class_members(p, n0, req, A);
    const int parities = static_cast<int>(binom(m - 1, j));
    const auto code = class_code(F, static_cast<int>(members.size()), parities);
    std::map<int, ExtElement> positions;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto it = known.find(members[i].users);
      if (it != known.end()) positions.emplace(static_cast<int>(i), it->second);
    }
    for (const auto& tx : log)
      if ((tx.step == 2 || tx.step == 3) && tx.file == n0 && tx.group == A)
        positions.emplace(code.k + tx.parity_index, tx.value);
    std::vector<ExtElement> decoded;
    try {
      decoded = mds_erasure_decode(code, ctx.field, positions);
    } catch (const TooManyErasures& ex) {
      throw MissingSymbols("class " + set_string(A) + " of file " + file_name(n0) + ": " + ex.what());
    }
    for (std::size_t i = 0; i < members.size(); ++i) known.emplace(members[i].users, decoded[i]);
  }
  std::vector<ExtElement> out;
  out.reserve(subsets.size());
  for (UserMask S : subsets) out.push_back(known.at(S));
  return out;
}

/// Independent check: does the span of everything user k knows contain every
/// segment of its file? Works over the full N C(K, t) segment space with
/// GF(q^m) coefficients, sharing nothing with the structured decoder.
inline bool oracle_decodable(const SchemeParams& p, const ExtField& ext, int k, const Demand& d,
                             const TransmissionLog& log, const UserCache& cache) {
  const SegmentIndex index(p);
  const auto D = static_cast<std::size_t>(index.size());
  const auto basis = user_basis(p, k);
  const std::size_t rows = log.size() + cache.segment_rows.rows();
  Matrix<ExtField> known(ext, rows, D);
  std::size_t r = 0;
  // scalar rows first keep early pivots in the base field
  for (const auto& tx : log) {
    for (const auto& [seg, c] : tx.coeffs) {
      const auto col = static_cast<std::size_t>(index.index(seg));
      known.set(r, col, ext.add(known.at(r, col), ext.embed(c)));
    }
    ++r;
  }
  for (std::size_t i = 0; i < cache.segment_rows.rows(); ++i, ++r)
    for (std::size_t j = 0; j < basis.size(); ++j)
      known.set(r, static_cast<std::size_t>(index.index(basis[j])), cache.segment_rows.at(i, j));
  const std::size_t base_rank = rank(known);

  const int n0 = d.at(static_cast<std::size_t>(k - 1));
  const auto& subsets = index.subsets();
  Matrix<ExtField> wanted(ext, subsets.size(), D);
  for (std::size_t i = 0; i < subsets.size(); ++i)
    wanted.set(i, static_cast<std::size_t>(index.index({n0, subsets[i]})), ext.one());
  return rank(vstack(known, wanted)) == base_rank;
}

/// Result of the block-structure check on G (or G').
struct BlockCheck {
  bool ok = false;
  std::size_t rank = 0;
  std::size_t blocks = 0;
  std::string detail;
};

namespace detail {

/// Row group of each codeword position: all cached parities form one
/// identity group; a basis segment of a requested file whose class A has
/// 1 <= |A| < t belongs to the group (file, A); every other row stands alone.
inline std::vector<long> row_groups(const SchemeParams& p, const EnhancedDemand& e, const CollectedSystem& sys) {
  const std::size_t P = sys.basis.size();
  std::vector<long> group(sys.G.rows());
  std::map<std::pair<int, UserMask>, long> ids;
  long next = 1;
  for (std::size_t r = 0; r < group.size(); ++r) {
    if (r >= P) {
      group[r] = 0;
      continue;
    }
    const auto& seg = sys.basis[r];
    const bool requested = std::find(e.requested.begin(), e.requested.end(), seg.file) != e.requested.end();
    const UserMask A = seg.users & ~e.set_of(seg.file);
    if (requested && set_size(A) >= 1 && set_size(A) < p.t()) {
      const auto key = std::make_pair(seg.file, A);
      auto it = ids.find(key);
      if (it == ids.end()) it = ids.emplace(key, next++).first;
      group[r] = it->second;
    } else {
      group[r] = next++;
    }
  }
  return group;
}

}  // namespace detail

/// Checks that G is block diagonal under the row grouping with every block of
/// full column rank. For the semi-systematic variant the sum columns are set
/// aside: the remaining columns must be block diagonal, and the sum columns
/// restricted to rows no other column touches must have full column rank.
inline BlockCheck check_block_structure(const SchemeParams& p, const EnhancedDemand& e, const CollectedSystem& sys) {
  BlockCheck out;
  out.rank = rank(sys.G);
  const std::size_t P = sys.basis.size();
  if (out.rank != P || sys.G.cols() != P) {
    out.detail = "rank " + std::to_string(out.rank) + " with " + std::to_string(sys.G.cols()) + " columns, need " +
                 std::to_string(P);
    return out;
  }
  if (sys.variant == CacheVariant::Generic) {
    out.ok = true;
    out.detail = "generic variant: rank only";
    return out;
  }
  const auto group = detail::row_groups(p, e, sys);
  const std::size_t sums = sys.variant == CacheVariant::SemiSystematic ? static_cast<std::size_t>(p.semi_sum_count()) : 0;
  std::map<long, std::vector<std::size_t>> block_cols;
  std::vector<bool> touched(sys.G.rows(), false);
  for (std::size_t j = sums; j < sys.G.cols(); ++j) {
    std::optional<long> g;
    for (std::size_t r = 0; r < sys.G.rows(); ++r) {
      if (sys.G.at(r, j) == 0) continue;
      touched[r] = true;
      if (g && *g != group[r]) {
        out.detail = "column " + std::to_string(j) + " spans two row groups";
        return out;
      }
      g = group[r];
    }
    if (!g) {
      out.detail = "column " + std::to_string(j) + " is zero";
      return out;
    }
    block_cols[*g].push_back(j);
  }
  for (const auto& [g, cols] : block_cols) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < group.size(); ++r)
      if (group[r] == g) rows.push_back(r);
    const auto block = select_columns(select_rows(sys.G, rows), cols);
    if (rank(block) != cols.size()) {
      out.detail = "block of group " + std::to_string(g) + " is rank deficient";
      return out;
    }
  }
  out.blocks = block_cols.size();
  if (sums > 0) {
    std::vector<std::size_t> free_rows, sum_cols;
    for (std::size_t r = 0; r < touched.size(); ++r)
      if (!touched[r]) free_rows.push_back(r);
    for (std::size_t j = 0; j < sums; ++j) sum_cols.push_back(j);
    const auto top = select_columns(select_rows(sys.G, free_rows), sum_cols);
    if (rank(top) != sums) {
      out.detail = "sum columns are rank deficient on the free rows";
      return out;
    }
    ++out.blocks;
  }
  out.ok = true;
  return out;
}

/// One line of a verification report.
struct UserVerdict {
  Demand demand;
  int user = 0;
  bool decoded = false;
  bool oracle = false;
  std::size_t g_rank = 0;
  std::size_t symbols_received = 0;
  std::size_t symbols_cached = 0;
  bool counts_match = false;
  bool block_structure = false;
  std::string error;
};

inline nlohmann::json to_json(const UserVerdict& v) {
  nlohmann::json j{{"demand", v.demand},
                   {"user", v.user},
                   {"decoded", v.decoded},
                   {"oracle", v.oracle},
                   {"G_rank", v.g_rank},
                   {"symbols_received", v.symbols_received},
                   {"symbols_cached", v.symbols_cached},
                   {"counts_match", v.counts_match},
                   {"block_structure", v.block_structure}};
  if (!v.error.empty()) j["error"] = v.error;
  return j;
}

}  // namespace cachecode

#endif  // CACHECODE_DECODER_HPP
