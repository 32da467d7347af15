#ifndef CACHECODE_DELIVERY_HPP
#define CACHECODE_DELIVERY_HPP

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cachecode/codes.hpp"
#include "cachecode/combinatorics.hpp"
#include "cachecode/errors.hpp"
#include "cachecode/placement.hpp"
#include "cachecode/rational.hpp"

namespace cachecode {

/// d[k-1] is the file requested by user k.
using Demand = std::vector<int>;

inline void validate_demand(const SchemeParams& p, const Demand& d) {
  if (static_cast<int>(d.size()) != p.K())
    throw InvalidParams("demand has " + std::to_string(d.size()) + " entries, expected K = " + std::to_string(p.K()));
  for (int f : d)
    if (f < 1 || f > p.N()) throw InvalidParams("demand entry " + std::to_string(f) + " is not a file index");
}

/// "1,1,2,2".
inline std::string demand_string(const Demand& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "," : "") + std::to_string(d[i]);
  return out;
}

/// "(A,A,B,B)".
inline std::string demand_letters(const Demand& d) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "," : "") + file_name(d[i]);
  return out + ")";
}

struct DemandProfile {
  std::vector<UserMask> requesters;  // index n-1
  std::vector<int> counts;
  std::vector<int> requested_files;

  UserMask requesters_of(int n) const { return requesters[static_cast<std::size_t>(n - 1)]; }
  int count_of(int n) const { return counts[static_cast<std::size_t>(n - 1)]; }
};

inline DemandProfile profile(const SchemeParams& p, const Demand& d) {
  validate_demand(p, d);
  DemandProfile out{std::vector<UserMask>(static_cast<std::size_t>(p.N()), 0),
                    std::vector<int>(static_cast<std::size_t>(p.N()), 0), {}};
  for (int k = 1; k <= p.K(); ++k) {
    const auto n = static_cast<std::size_t>(d[static_cast<std::size_t>(k - 1)] - 1);
    out.requesters[n] |= user_bit(k);
    ++out.counts[n];
  }
  for (int n = 1; n <= p.N(); ++n)
    if (out.count_of(n) > 0) out.requested_files.push_back(n);
  return out;
}

/// A demand in which every file is requested, derived from the original one
/// by moving single users onto the unrequested files.
struct EnhancedDemand {
  Demand original;
  Demand enhanced;
  std::vector<UserMask> sets;  // enhanced requester set per file, index n-1
  std::map<int, int> f;        // substitute file -> file its user came from
  std::map<int, int> u;        // substitute file -> the moved user
  std::vector<int> requested;  // originally requested files, ascending

  UserMask set_of(int n) const { return sets[static_cast<std::size_t>(n - 1)]; }
  int count_of(int n) const { return set_size(set_of(n)); }
  bool is_substitute(int n) const { return f.contains(n); }
  bool trivial() const { return f.empty(); }
};

/// Checks both structural properties of an enhancement; throws Error on violation.
inline void check_enhancement(const SchemeParams& p, const EnhancedDemand& e) {
  const auto prof = profile(p, e.original);
  UserMask seen = 0;
  for (int n = 1; n <= p.N(); ++n) {
    const UserMask s = e.set_of(n);
    if (s == 0) throw Error("enhancement leaves file " + std::to_string(n) + " without requesters");
    if (seen & s) throw Error("enhanced requester sets overlap");
    seen |= s;
    if (prof.count_of(n) == 0 && set_size(s) != 1) throw Error("substitute file must have exactly one requester");
  }
  if (seen != all_users(p.K())) throw Error("enhanced requester sets do not cover every user");
  for (int k = 1; k <= p.K(); ++k) {
    const int n = e.original[static_cast<std::size_t>(k - 1)];
    if (has_user(e.set_of(n), k)) continue;
    const int moved_to = e.enhanced[static_cast<std::size_t>(k - 1)];
    if (!e.is_substitute(moved_to) || e.u.at(moved_to) != k || e.f.at(moved_to) != n)
      throw Error("user " + std::to_string(k) + " lost its file without being a substitute");
  }
}

/// Greedy enhancement: unrequested files in ascending order each take the
/// largest-index remaining requester of the currently most requested file,
/// ties going to the larger file index.
inline EnhancedDemand enhance(const SchemeParams& p, const Demand& d) {
  const auto prof = profile(p, d);
  EnhancedDemand e{d, d, prof.requesters, {}, {}, prof.requested_files};
  for (int n = 1; n <= p.N(); ++n) {
    if (prof.count_of(n) > 0) continue;
    int from = 0;
    for (int c = 1; c <= p.N(); ++c)
      if (from == 0 || e.count_of(c) >= e.count_of(from)) from = c;
    if (e.count_of(from) < 2) throw InvalidParams("no enhancement exists: N > K");
    const int user = members(e.set_of(from)).back();
    e.sets[static_cast<std::size_t>(from - 1)] &= ~user_bit(user);
    e.sets[static_cast<std::size_t>(n - 1)] = user_bit(user);
    e.enhanced[static_cast<std::size_t>(user - 1)] = n;
    e.f[n] = from;
    e.u[n] = user;
  }
  check_enhancement(p, e);
  return e;
}

/// One multicast symbol.
///
/// For a Step-2/3 parity, `group` is its class A (empty for Step 3) and
/// `parity_index` its column in the class's MDS parity block. Uncoded symbols
/// carry their segment's user set in `group`.
struct Transmission {
  int step = 0;
  int file = 0;
  std::string label;
  std::vector<std::pair<SegmentId, PrimeField::Element>> coeffs;
  ExtElement value;
  UserMask group = 0;
  int parity_index = -1;

  bool uncoded() const { return step == 1 || step == 4; }
};

using TransmissionLog = std::vector<Transmission>;

/// Segments W_{n,S} with S meeting the complement of `requesters` in exactly A,
/// in canonical order: these are the systematic positions of the class code.
inline std::vector<SegmentId> class_members(const SchemeParams& p, int n, UserMask requesters, UserMask A) {
  std::vector<SegmentId> out;
  for (UserMask B : subsets_of(requesters, p.t() - set_size(A))) out.push_back({n, A | B});
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

/// Systematic MDS code over a class with the given member and parity counts.
inline SystematicMds class_code(const PrimeField& F, int members_count, int parities) {
  return cauchy_systematic_mds(members_count + parities, members_count, F);
}

namespace detail {

inline std::string class_label(int n, const std::vector<SegmentId>& members, int index) {
  std::string out = "L[" + file_name(n) + ";{";
  for (std::size_t i = 0; i < members.size(); ++i) out += (i ? "," : "") + set_string(members[i].users);
  return out + "};" + std::to_string(index + 1) + "]";
}

inline Transmission uncoded(int step, const SegmentId& s) {
  return {step, s.file, segment_label(s), {{s, 1}}, {}, s.users, -1};
}

inline void emit_class(TransmissionLog& out, const SchemeParams& p, const PrimeField& F, int step, int n,
                       UserMask requesters, UserMask A, int parities) {
  if (parities <= 0) return;
  const auto members = class_members(p, n, requesters, A);
  const auto code = class_code(F, static_cast<int>(members.size()), parities);
  for (int j = 0; j < parities; ++j) {
    Transmission tx{step, n, class_label(n, members, j), {}, {}, A, j};
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto c = code.parity.at(i, static_cast<std::size_t>(j));
      if (c != 0) tx.coeffs.emplace_back(members[i], c);
    }
    out.push_back(std::move(tx));
  }
}

}  // namespace detail

/// Steps 1-3 for the given files under the enhanced requester sets, without
/// symbol values. Order: step, then file, then class (size, then lexicographic).
inline TransmissionLog plan_steps_123(const SchemeParams& p, const PrimeField& F, const EnhancedDemand& e,
                                      const std::vector<int>& files) {
  const int t = p.t();
  TransmissionLog out;
  for (int n : files) {
    const UserMask others = all_users(p.K()) & ~e.set_of(n);
    for (UserMask S : subsets_of(others, t)) out.push_back(detail::uncoded(1, {n, S}));
  }
  for (int n : files) {
    const UserMask req = e.set_of(n);
    const UserMask others = all_users(p.K()) & ~req;
    const int m = set_size(req);
    for (int a = std::max(1, t - m); a <= std::min(t - 1, p.K() - m); ++a)
      for (UserMask A : subsets_of(others, a))
        detail::emit_class(out, p, F, 2, n, req, A, static_cast<int>(binom(m - 1, t - a)));
  }
  for (int n : files) {
    const UserMask req = e.set_of(n);
    detail::emit_class(out, p, F, 3, n, req, 0, static_cast<int>(binom(set_size(req) - 1, t)));
  }
  return out;
}

/// Initial Step-4 counters: tau[(n, A)] = C(m_n - 1, t - |A| - 1).
inline long step4_counter(const SchemeParams& p, const EnhancedDemand& e, int n, UserMask A) {
  return binom(e.count_of(n) - 1, p.t() - set_size(A) - 1);
}

/// Step 4: for each substitute file n and each S without u(n), send
/// W_{f(n),S} while the counter of its class allows, otherwise W_{n,S}.
inline TransmissionLog plan_step_4(const SchemeParams& p, const EnhancedDemand& e) {
  TransmissionLog out;
  std::map<std::pair<int, UserMask>, long> tau;
  for (const auto& [n, from] : e.f) {
    const int user = e.u.at(n);
    const UserMask outside = all_users(p.K()) & ~e.set_of(from);
    for (UserMask S : lex_subsets(p.K(), p.t())) {
      if (has_user(S, user)) continue;
      const UserMask A = S & outside;
      const auto key = std::make_pair(from, A);
      auto it = tau.find(key);
      if (it == tau.end()) it = tau.emplace(key, step4_counter(p, e, from, A)).first;
      --it->second;
      out.push_back(detail::uncoded(4, {it->second >= 0 ? from : n, S}));
    }
  }
  return out;
}

/// Fills in every value from the library.
inline void evaluate(const Library& lib, TransmissionLog& log) {
  const ExtField& ext = lib.field();
  for (auto& tx : log) {
    ExtElement acc = ext.zero();
    for (const auto& [seg, c] : tx.coeffs) acc = ext.add(acc, ext.scale(lib.value(seg), c));
    tx.value = std::move(acc);
  }
}

/// Steps 1-3 over every file; requires a demand in which all files are requested.
inline TransmissionLog transmit_steps_123(const Library& lib, const EnhancedDemand& e) {
  const auto& p = lib.params();
  std::vector<int> files;
  for (int n = 1; n <= p.N(); ++n) {
    if (e.count_of(n) < 1) throw InvalidParams("steps 1-3 need every file requested");
    files.push_back(n);
  }
  auto log = plan_steps_123(p, lib.field().base(), e, files);
  evaluate(lib, log);
  return log;
}

/// Appends the Step-4 symbols to `partial`.
inline TransmissionLog transmit_step_4(const Library& lib, const EnhancedDemand& e, TransmissionLog partial) {
  auto extra = plan_step_4(lib.params(), e);
  evaluate(lib, extra);
  partial.insert(partial.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
  return partial;
}

inline TransmissionLog plan_delivery(const SchemeParams& p, const PrimeField& F, const EnhancedDemand& e) {
  auto log = plan_steps_123(p, F, e, e.requested);
  const auto extra = plan_step_4(p, e);
  log.insert(log.end(), extra.begin(), extra.end());
  return log;
}

/// Full delivery: Steps 1-3 for the requested files under the enhanced
/// demand, then Step 4 for the substitute files.
inline TransmissionLog deliver(const Library& lib, const EnhancedDemand& e) {
  auto log = plan_delivery(lib.params(), lib.field().base(), e);
  evaluate(lib, log);
  const auto expected = lib.params().N() * binom(lib.params().K() - 1, lib.params().t());
  if (static_cast<std::int64_t>(log.size()) != expected)
    throw Error("delivery emitted " + std::to_string(log.size()) + " symbols, expected " + std::to_string(expected));
  return log;
}

inline TransmissionLog deliver(const Library& lib, const Demand& d) { return deliver(lib, enhance(lib.params(), d)); }

/// True iff every value equals its recorded combination applied to the library.
inline bool replay_matches(const Library& lib, const TransmissionLog& log) {
  auto copy = log;
  evaluate(lib, copy);
  for (std::size_t i = 0; i < log.size(); ++i)
    if (!(copy[i].value == log[i].value)) return false;
  return true;
}

/// N C(K-1, t) / C(K, t) = N (K - t) / K, for 0 <= t <= K.
inline Rational rate(int N, int K, int t) {
  if (t < 0 || t > K) throw InvalidParams("rate needs 0 <= t <= K");
  return Rational(N * binom(K - 1, t), binom(K, t));
}

inline Rational rate(const SchemeParams& p) { return rate(p.N(), p.K(), p.t()); }

/// One JSON object per line: {step, file, label, coeffs, value_hex}.
inline void export_log_jsonl(const TransmissionLog& log, const ExtField& ext, std::ostream& os) {
  for (const auto& tx : log) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [seg, c] : tx.coeffs) coeffs.push_back({segment_key(seg), c});
    const nlohmann::json line{{"step", tx.step},
                              {"file", tx.file},
                              {"label", tx.label},
                              {"coeffs", std::move(coeffs)},
                              {"value_hex", ext.to_hex(tx.value)}};
    os << line.dump() << '\n';
  }
}

}  // namespace cachecode

#endif  // CACHECODE_DELIVERY_HPP
