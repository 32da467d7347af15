#ifndef CACHECODE_CODES_HPP
#define CACHECODE_CODES_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cachecode/errors.hpp"
#include "cachecode/finite_field.hpp"
#include "cachecode/linalg.hpp"

namespace cachecode {

// ---------------------------------------------------------------------------
// Systematic MDS codes from Cauchy matrices
// ---------------------------------------------------------------------------

/// Systematic (n, k) code over GF(q) with generator [I_k | parity].
struct SystematicMds {
  int n = 0;
  int k = 0;
  Matrix<PrimeField> parity;  // k x (n - k)

  int parity_count() const noexcept { return n - k; }
};

/// Cauchy parity block: the first n field elements are split into k row points
/// x_i = i and n - k column points y_j = k + j; entry (i, j) = 1 / (x_i - y_j).
/// Every square submatrix of a Cauchy matrix is invertible, which makes the
/// code MDS.
inline SystematicMds cauchy_systematic_mds(int n, int k, const PrimeField& field) {
  if (k < 1 || n < k) throw InvalidParams("MDS code needs n >= k >= 1");
  if (static_cast<std::uint64_t>(n) > field.size())
    throw FieldTooSmall("MDS code of length " + std::to_string(n) + " needs q >= n, have q = " +
                        std::to_string(field.modulus()));
  Matrix<PrimeField> parity(field, static_cast<std::size_t>(k), static_cast<std::size_t>(n - k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n - k; ++j) {
      const auto x = field.from_int(i);
      const auto y = field.from_int(k + j);
      parity.set(i, j, field.inv(field.sub(x, y)));
    }
  return {n, k, std::move(parity)};
}

/// The n - k parity symbols of `info`.
inline std::vector<ExtElement> mds_encode(const SystematicMds& code, const ExtField& ext,
                                          std::span<const ExtElement> info) {
  if (static_cast<int>(info.size()) != code.k) throw DimensionMismatch("mds_encode: need exactly k symbols");
  return combine_columns(ext, info, code.parity);
}

/// Recovers the k information symbols from any k or more known codeword
/// positions (0..k-1 systematic, k..n-1 parity).
inline std::vector<ExtElement> mds_erasure_decode(const SystematicMds& code, const ExtField& ext,
                                                  const std::map<int, ExtElement>& known) {
  if (static_cast<int>(known.size()) < code.k)
    throw TooManyErasures("have " + std::to_string(known.size()) + " of the " + std::to_string(code.k) +
                          " symbols needed");
  const PrimeField& F = code.parity.field();
  // row per known position: the generator column at that position
  Matrix<PrimeField> sys(F, known.size(), static_cast<std::size_t>(code.k));
  std::vector<ExtElement> rhs;
  std::size_t r = 0;
  for (const auto& [pos, value] : known) {
    if (pos < 0 || pos >= code.n) throw InvalidParams("codeword position out of range");
    for (int i = 0; i < code.k; ++i)
      sys.set(r, i, pos < code.k ? (pos == i ? F.one() : F.zero()) : code.parity.at(i, pos - code.k));
    rhs.push_back(value);
    ++r;
  }
  return solve(embed(ext, sys), rhs);
}

// ---------------------------------------------------------------------------
// Linearized polynomials and systematic rank-metric codes
// ---------------------------------------------------------------------------

/// f(x) = sum_i coeffs[i] * x^(q^i).
struct LinearizedPoly {
  std::vector<ExtElement> coeffs;
};

inline ExtElement linearized_eval(const ExtField& ext, const LinearizedPoly& f, const ExtElement& x) {
  ExtElement acc = ext.zero();
  ExtElement power = x;  // x^(q^i)
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (i > 0) power = ext.frobenius(power, 1);
    acc = ext.add(acc, ext.mul(f.coeffs[i], power));
  }
  return acc;
}

/// Square Moore matrix: row i holds points[i]^(q^j), j = 0..cols-1.
inline Matrix<ExtField> moore_matrix(const ExtField& ext, std::span<const ExtElement> points, std::size_t cols) {
  Matrix<ExtField> M(ext, points.size(), cols);
  for (std::size_t i = 0; i < points.size(); ++i) {
    ExtElement p = points[i];
    for (std::size_t j = 0; j < cols; ++j) {
      if (j > 0) p = ext.frobenius(p, 1);
      M.set(i, j, p);
    }
  }
  return M;
}

/// The unique linearized polynomial with |points| coefficients taking `evals`
/// at `points`. Points must be linearly independent over the base field.
inline LinearizedPoly linearized_interpolate(const ExtField& ext, std::span<const ExtElement> points,
                                             std::span<const ExtElement> evals) {
  if (points.size() != evals.size()) throw DimensionMismatch("interpolation needs one value per point");
  if (!linearly_independent_over_base(ext, points))
    throw DependentPoints("interpolation points are linearly dependent over the base field");
  const auto M = moore_matrix(ext, points, points.size());
  try {
    return {solve(M, evals)};
  } catch (const Singular&) {
    throw DependentPoints("Moore matrix is singular");
  }
}

/// Systematic (P_o, P) rank-metric code: information symbols are the values of
/// a linearized polynomial at theta_1..theta_P, parities its values at
/// theta_{P+1}..theta_{P_o}. theta_i = alpha^(i-1), so P_o <= m is required.
class RankMetricCode {
 public:
  RankMetricCode(ExtField field, int dimension, int length)
      : field_(std::move(field)), P_(dimension), Po_(length), parity_map_(field_, 0, 0) {
    if (P_ < 1 || Po_ < P_) throw InvalidParams("rank-metric code needs 1 <= P <= P_o");
    if (Po_ > field_.degree())
      throw InvalidParams("rank-metric code of length " + std::to_string(Po_) + " needs m >= P_o, have m = " +
                          std::to_string(field_.degree()));
    for (int i = 0; i < Po_; ++i) theta_.push_back(field_.alpha_power(static_cast<std::uint64_t>(i)));
    parity_map_ = build_parity_map();
  }

  const ExtField& field() const noexcept { return field_; }
  int dimension() const noexcept { return P_; }
  int length() const noexcept { return Po_; }
  int parity_count() const noexcept { return Po_ - P_; }
  const std::vector<ExtElement>& theta() const noexcept { return theta_; }

  /// (P_o - P) x P matrix over GF(q^m) taking information symbols to parities.
  /// Not a GF(q) matrix: the parities are GF(q^m)-linear in the information.
  const Matrix<ExtField>& parity_map() const noexcept { return parity_map_; }

 private:
  Matrix<ExtField> build_parity_map() const {
    const std::size_t P = static_cast<std::size_t>(P_);
    const std::size_t R = static_cast<std::size_t>(Po_ - P_);
    if (R == 0) return Matrix<ExtField>(field_, 0, P);
    // H * M = T where M is the Moore matrix of the systematic points and T that
    // of the parity points; solve M^T H^T = T^T in one elimination.
    const auto M = moore_matrix(field_, std::span(theta_).first(P), P);
    const auto T = moore_matrix(field_, std::span(theta_).subspan(P), P);
    auto ech = row_reduce(hstack(M.transpose(), T.transpose()));
    if (ech.pivots.size() < P || ech.pivots[P - 1] != P - 1) throw DependentPoints("systematic points are dependent");
    Matrix<ExtField> H(field_, R, P);
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t r = 0; r < R; ++r) H.set(r, i, ech.reduced.at(i, P + r));
    return H;
  }

  ExtField field_;
  int P_;
  int Po_;
  std::vector<ExtElement> theta_;
  Matrix<ExtField> parity_map_;
};

/// Full codeword: the P information symbols followed by P_o - P parities.
inline std::vector<ExtElement> rank_metric_systematic_encode(const RankMetricCode& code,
                                                             std::span<const ExtElement> info) {
  if (static_cast<int>(info.size()) != code.dimension())
    throw DimensionMismatch("rank-metric encode: need exactly P symbols");
  std::vector<ExtElement> out(info.begin(), info.end());
  const auto parities = multiply(code.parity_map(), info);
  out.insert(out.end(), parities.begin(), parities.end());
  return out;
}

/// Recovers the P information symbols from combined = codeword * G, where G is
/// a P_o x P matrix over GF(q) of rank P. The evaluation points theta * G are
/// independent, so interpolation identifies f, which is then read at
/// theta_1..theta_P.
inline std::vector<ExtElement> rank_metric_decode(const RankMetricCode& code, const Matrix<PrimeField>& G,
                                                  std::span<const ExtElement> combined) {
  const auto P = static_cast<std::size_t>(code.dimension());
  if (G.rows() != static_cast<std::size_t>(code.length()))
    throw DimensionMismatch("rank-metric decode: G must have P_o rows");
  if (G.cols() != combined.size()) throw DimensionMismatch("rank-metric decode: one symbol per column of G");
  const std::size_t r = rank(G);
  if (G.cols() != P || r < P)
    throw RankDeficient("combination matrix has rank " + std::to_string(r) + ", need " + std::to_string(P));
  const ExtField& ext = code.field();
  const auto points = combine_columns(ext, code.theta(), G);
  const auto f = linearized_interpolate(ext, points, combined);
  std::vector<ExtElement> info;
  info.reserve(P);
  for (std::size_t i = 0; i < P; ++i) info.push_back(linearized_eval(ext, f, code.theta()[i]));
  return info;
}

}  // namespace cachecode

#endif  // CACHECODE_CODES_HPP
