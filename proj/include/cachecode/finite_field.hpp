#ifndef CACHECODE_FINITE_FIELD_HPP
#define CACHECODE_FINITE_FIELD_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cachecode/errors.hpp"

namespace cachecode {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint32_t next_prime_at_least(std::uint64_t n) {
  if (n < 2) n = 2;
  while (!is_prime(n)) ++n;
  return static_cast<std::uint32_t>(n);
}

/// GF(q) for prime q < 2^31. Elements are residues in [0, q).
class PrimeField {
 public:
  using Element = std::uint32_t;

  explicit PrimeField(std::uint32_t q) : q_(q) {
    if (q < 2 || !is_prime(q)) throw CompositeModulus("modulus " + std::to_string(q) + " is not prime");
    if (q >= (1U << 31)) throw InvalidParams("prime modulus must be below 2^31");
  }

  std::uint32_t modulus() const noexcept { return q_; }
  std::uint64_t size() const noexcept { return q_; }

  Element zero() const noexcept { return 0; }
  Element one() const noexcept { return 1; }
  bool is_zero(Element a) const noexcept { return a == 0; }

  Element from_int(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(q_);
    return static_cast<Element>(r < 0 ? r + q_ : r);
  }
  Element add(Element a, Element b) const noexcept {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + q_ - b; }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Element mul(Element a, Element b) const noexcept {
    return static_cast<Element>(static_cast<std::uint64_t>(a) * b % q_);
  }
  Element pow(Element a, std::uint64_t e) const noexcept {
    Element r = 1;
    while (e) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }
  Element inv(Element a) const {
    if (a == 0) throw ZeroInverse("inverse of zero in GF(" + std::to_string(q_) + ")");
    return pow(a, q_ - 2);
  }
  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t q_;
};

inline PrimeField make_prime_field(std::int64_t q) {
  if (q < 2 || q >= (std::int64_t{1} << 31) || !is_prime(static_cast<std::uint64_t>(q)))
    throw CompositeModulus("modulus " + std::to_string(q) + " is not prime");
  return PrimeField(static_cast<std::uint32_t>(q));
}

/// Dense univariate polynomials over GF(q), ascending coefficients.
namespace poly {

using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly sub(const PrimeField& F, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
  trim(a);
  return a;
}

inline Poly mul(const PrimeField& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

/// Quotient and remainder of a / b, b nonzero.
inline std::pair<Poly, Poly> divmod(const PrimeField& F, Poly a, const Poly& b) {
  trim(a);
  const int db = degree(b);
  if (db < 0) throw ZeroInverse("polynomial division by zero");
  const auto lead_inv = F.inv(b.back());
  if (degree(a) < db) return {Poly{}, a};
  Poly q(a.size() - b.size() + 1, 0);
  for (int i = degree(a); i >= db; --i) {
    const auto c = F.mul(a[i], lead_inv);
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]));
  }
  a.resize(db);
  trim(a);
  trim(q);
  return {q, a};
}

inline Poly mod(const PrimeField& F, const Poly& a, const Poly& m) { return divmod(F, a, m).second; }

inline Poly mulmod(const PrimeField& F, const Poly& a, const Poly& b, const Poly& m) {
  return mod(F, mul(F, a, b), m);
}

inline Poly powmod(const PrimeField& F, Poly base, std::uint64_t e, const Poly& m) {
  Poly r{1};
  base = mod(F, base, m);
  while (e) {
    if (e & 1U) r = mulmod(F, r, base, m);
    base = mulmod(F, base, base, m);
    e >>= 1U;
  }
  return r;
}

inline Poly make_monic(const PrimeField& F, Poly a) {
  trim(a);
  if (a.empty()) return a;
  const auto li = F.inv(a.back());
  for (auto& c : a) c = F.mul(c, li);
  return a;
}

inline Poly gcd(const PrimeField& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, a);
}

/// Ben-Or irreducibility test: f of degree m is irreducible iff
/// gcd(x^(q^i) - x, f) = 1 for every 1 <= i <= m/2.
inline bool is_irreducible(const PrimeField& F, Poly f) {
  trim(f);
  const int m = degree(f);
  if (m < 1) return false;
  if (m == 1) return true;
  const Poly x{0, 1};
  Poly h = x;
  for (int i = 1; i <= m / 2; ++i) {
    h = powmod(F, h, F.modulus(), f);
    if (degree(gcd(F, sub(F, h, x), f)) > 0) return false;
  }
  return true;
}

}  // namespace poly

/// Seeded search for a monic irreducible polynomial of degree m over `base`.
/// Returned as m + 1 ascending coefficients with a trailing 1.
inline poly::Poly find_irreducible(const PrimeField& base, int m, std::uint64_t seed) {
  if (m < 1) throw InvalidParams("extension degree must be at least 1");
  std::mt19937_64 rng(seed);
  const std::uint64_t q = base.modulus();
  while (true) {
    poly::Poly f(m + 1);
    for (int i = 0; i < m; ++i) f[i] = static_cast<std::uint32_t>(rng() % q);
    f[m] = 1;
    if (poly::is_irreducible(base, f)) return f;
  }
}

/// An element of GF(q^m): m coefficients over GF(q) in the polynomial basis,
/// ascending degree.
struct ExtElement {
  std::vector<std::uint32_t> coeffs;

  bool operator==(const ExtElement&) const = default;
  auto operator<=>(const ExtElement&) const = default;
};

/// GF(q^m) = GF(q)[x] / (modulus). Cheap to copy: the tables are shared and immutable.
class ExtField {
 public:
  using Element = ExtElement;

  ExtField(PrimeField base, poly::Poly modulus) {
    poly::trim(modulus);
    if (poly::degree(modulus) < 1) throw InvalidParams("extension modulus must have degree >= 1");
    if (modulus.back() != 1) throw InvalidParams("extension modulus must be monic");
    if (!poly::is_irreducible(base, modulus)) throw ReducibleModulus("extension modulus is reducible");
    d_ = std::make_shared<Data>(base, std::move(modulus));
  }

  /// Degree-m extension with a seeded irreducible modulus.
  static ExtField with_degree(PrimeField base, int m, std::uint64_t seed = 0) {
    return ExtField(base, find_irreducible(base, m, seed));
  }

  const PrimeField& base() const noexcept { return d_->base; }
  int degree() const noexcept { return d_->m; }
  const poly::Poly& modulus() const noexcept { return d_->modulus; }

  Element zero() const { return Element{std::vector<std::uint32_t>(d_->m, 0)}; }
  Element one() const { return embed(1); }
  Element embed(PrimeField::Element c) const {
    Element r = zero();
    r.coeffs[0] = c;
    return r;
  }
  Element from_coeffs(std::vector<std::uint32_t> c) const {
    if (static_cast<int>(c.size()) != d_->m) throw DimensionMismatch("coefficient vector length must equal m");
    for (auto v : c)
      if (v >= d_->base.modulus()) throw InvalidParams("coefficient outside the base field");
    return Element{std::move(c)};
  }
  /// alpha^i where alpha is the class of x.
  Element alpha_power(std::uint64_t i) const {
    Element x = zero();
    if (d_->m == 1) {
      x.coeffs[0] = d_->base.neg(d_->modulus[0]);
    } else {
      x.coeffs[1] = 1;
    }
    return pow(x, i);
  }

  bool is_zero(const Element& a) const {
    return std::all_of(a.coeffs.begin(), a.coeffs.end(), [](auto c) { return c == 0; });
  }
  bool is_scalar(const Element& a) const {
    return std::all_of(a.coeffs.begin() + 1, a.coeffs.end(), [](auto c) { return c == 0; });
  }

  Element add(const Element& a, const Element& b) const {
    Element r = a;
    for (int i = 0; i < d_->m; ++i) r.coeffs[i] = d_->base.add(a.coeffs[i], b.coeffs[i]);
    return r;
  }
  Element sub(const Element& a, const Element& b) const {
    Element r = a;
    for (int i = 0; i < d_->m; ++i) r.coeffs[i] = d_->base.sub(a.coeffs[i], b.coeffs[i]);
    return r;
  }
  Element neg(const Element& a) const {
    Element r = a;
    for (auto& c : r.coeffs) c = d_->base.neg(c);
    return r;
  }
  Element scale(const Element& a, PrimeField::Element c) const {
    Element r = a;
    for (auto& v : r.coeffs) v = d_->base.mul(v, c);
    return r;
  }

  Element mul(const Element& a, const Element& b) const {
    if (is_scalar(a)) return scale(b, a.coeffs[0]);
    if (is_scalar(b)) return scale(a, b.coeffs[0]);
    const int m = d_->m;
    const std::uint64_t q = d_->base.modulus();
    std::vector<std::uint64_t> prod(2 * m - 1, 0);
    if (d_->lazy) {
      for (int i = 0; i < m; ++i) {
        const std::uint64_t ai = a.coeffs[i];
        if (ai == 0) continue;
        for (int j = 0; j < m; ++j) prod[i + j] += ai * b.coeffs[j];
      }
      for (auto& p : prod) p %= q;
    } else {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a.coeffs[i]} * b.coeffs[j]) % q;
    }
    return reduce(prod);
  }

  Element square(const Element& a) const { return mul(a, a); }

  Element pow(Element a, std::uint64_t e) const {
    Element r = one();
    while (e) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }

  Element inv(const Element& a) const {
    if (is_zero(a)) throw ZeroInverse("inverse of zero in GF(q^m)");
    // extended Euclid on (a, modulus)
    const PrimeField& F = d_->base;
    poly::Poly r0 = d_->modulus, r1 = a.coeffs;
    poly::trim(r1);
    poly::Poly s0{}, s1{1};
    while (!r1.empty()) {
      auto [quot, rem] = poly::divmod(F, r0, r1);
      poly::Poly s2 = poly::sub(F, s0, poly::mul(F, quot, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 is a nonzero constant because the modulus is irreducible
    const auto c = F.inv(r0[0]);
    Element out = zero();
    for (std::size_t i = 0; i < s0.size(); ++i) out.coeffs[i] = F.mul(s0[i], c);
    return out;
  }
  Element div(const Element& a, const Element& b) const { return mul(a, inv(b)); }

  /// a^(q^i). The q-th power map is GF(q)-linear, so each application is a
  /// matrix-vector product against the precomputed images x^(jq).
  Element frobenius(const Element& a, std::uint64_t i) const {
    Element r = a;
    i %= static_cast<std::uint64_t>(d_->m);
    for (std::uint64_t step = 0; step < i; ++step) r = frobenius_once(r);
    return r;
  }

  template <class Rng>
  Element random(Rng& rng) const {
    Element r = zero();
    for (auto& c : r.coeffs) c = static_cast<std::uint32_t>(rng() % d_->base.modulus());
    return r;
  }

  /// Fixed-width hex of each coefficient, ascending degree.
  std::string to_hex(const Element& a) const {
    static constexpr char digits[] = "0123456789abcdef";
    int width = 1;
    for (std::uint64_t v = d_->base.modulus() - 1; v >= 16; v >>= 4) ++width;
    std::string out;
    out.reserve(static_cast<std::size_t>(width) * a.coeffs.size());
    for (auto c : a.coeffs)
      for (int s = width - 1; s >= 0; --s) out += digits[(c >> (4 * s)) & 0xFU];
    return out;
  }

  bool operator==(const ExtField& o) const {
    return d_ == o.d_ || (d_->base == o.d_->base && d_->modulus == o.d_->modulus);
  }

 private:
  struct Data {
    Data(PrimeField b, poly::Poly mod) : base(b), m(poly::degree(mod)), modulus(std::move(mod)) {
      const std::uint64_t q = base.modulus();
      // 2m products of size < q^2 must fit in 64 bits
      lazy = (q - 1) * (q - 1) < (~std::uint64_t{0}) / (4 * static_cast<std::uint64_t>(m) + 4);
      // x^(m+i) mod modulus for i = 0..m-2
      high_powers.resize(m > 1 ? m - 1 : 0);
      poly::Poly xp(m + 1, 0);
      xp[m] = 1;
      for (int i = 0; i + 1 < m; ++i) {
        poly::Poly r = poly::mod(base, xp, modulus);
        r.resize(m, 0);
        high_powers[i] = r;
        xp.insert(xp.begin(), 0);
      }
    }
    PrimeField base;
    int m;
    poly::Poly modulus;
    bool lazy = true;
    std::vector<std::vector<std::uint32_t>> high_powers;
    std::vector<std::vector<std::uint32_t>> frob_images;  // (x^j)^q, filled lazily below
  };

  Element reduce(const std::vector<std::uint64_t>& prod) const {
    const int m = d_->m;
    const std::uint64_t q = d_->base.modulus();
    std::vector<std::uint64_t> acc(prod.begin(), prod.begin() + m);
    for (int i = 0; i + 1 < m; ++i) {
      const std::uint64_t c = prod[m + i];
      if (c == 0) continue;
      const auto& hp = d_->high_powers[i];
      if (d_->lazy) {
        for (int j = 0; j < m; ++j) acc[j] += c * hp[j];
      } else {
        for (int j = 0; j < m; ++j) acc[j] = (acc[j] + c * hp[j]) % q;
      }
    }
    Element r;
    r.coeffs.resize(m);
    for (int j = 0; j < m; ++j) r.coeffs[j] = static_cast<std::uint32_t>(acc[j] % q);
    return r;
  }

  const std::vector<std::vector<std::uint32_t>>& frob_images() const {
    std::call_once(frob_once_->flag, [this] {
      const int m = d_->m;
      Element x = zero();
      if (m == 1) {
        x.coeffs[0] = 1;
      } else {
        x.coeffs[1] = 1;
      }
      const Element xq = pow(x, d_->base.modulus());
      std::vector<std::vector<std::uint32_t>> imgs(m);
      Element cur = one();
      for (int j = 0; j < m; ++j) {
        imgs[j] = cur.coeffs;
        cur = mul(cur, xq);
      }
      frob_once_->images = std::move(imgs);
    });
    return frob_once_->images;
  }

  Element frobenius_once(const Element& a) const {
    if (d_->m == 1) return a;
    const auto& imgs = frob_images();
    const int m = d_->m;
    const std::uint64_t q = d_->base.modulus();
    std::vector<std::uint64_t> acc(m, 0);
    for (int j = 0; j < m; ++j) {
      const std::uint64_t c = a.coeffs[j];
      if (c == 0) continue;
      if (d_->lazy) {
        for (int i = 0; i < m; ++i) acc[i] += c * imgs[j][i];
      } else {
        for (int i = 0; i < m; ++i) acc[i] = (acc[i] + c * imgs[j][i]) % q;
      }
    }
    Element r;
    r.coeffs.resize(m);
    for (int i = 0; i < m; ++i) r.coeffs[i] = static_cast<std::uint32_t>(acc[i] % q);
    return r;
  }

  struct FrobCache {
    std::once_flag flag;
    std::vector<std::vector<std::uint32_t>> images;
  };

  std::shared_ptr<const Data> d_;
  std::shared_ptr<FrobCache> frob_once_ = std::make_shared<FrobCache>();
};

/// True iff the coefficient vectors of `v` have rank |v| over the base field.
inline bool linearly_independent_over_base(const ExtField& field, std::span<const ExtElement> v) {
  const PrimeField& F = field.base();
  const int m = field.degree();
  if (static_cast<int>(v.size()) > m) return false;
  std::vector<std::vector<std::uint32_t>> rows;
  rows.reserve(v.size());
  for (const auto& e : v) rows.push_back(e.coeffs);
  std::size_t rank = 0;
  for (int col = 0; col < m && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const auto inv = F.inv(rows[rank][col]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const auto f = F.mul(rows[r][col], inv);
      if (f == 0) continue;
      for (int c = col; c < m; ++c) rows[r][c] = F.sub(rows[r][c], F.mul(f, rows[rank][c]));
    }
    ++rank;
  }
  return rank == v.size();
}

}  // namespace cachecode

#endif  // CACHECODE_FINITE_FIELD_HPP
