#ifndef CACHECODE_WORKED_EXAMPLES_HPP
#define CACHECODE_WORKED_EXAMPLES_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cachecode/combinatorics.hpp"
#include "cachecode/decoder.hpp"
#include "cachecode/delivery.hpp"
#include "cachecode/errors.hpp"
#include "cachecode/finite_field.hpp"
#include "cachecode/linalg.hpp"
#include "cachecode/placement.hpp"
#include "cachecode/scheme.hpp"

namespace cachecode {

struct ExampleCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ExampleReport {
  std::string example;
  std::vector<ExampleCheck> checks;

  bool ok() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const ExampleCheck& c) { return c.ok; });
  }
};

// ---------------------------------------------------------------------------
// (N, K, t) = (2, 4, 2) over GF(5), hand-written caches and transmissions
// ---------------------------------------------------------------------------

namespace fixture_2x4 {

/// Segment i of a file (1-based) is the i-th 2-subset of {1..4} in
/// lexicographic order: 1 = {1,2}, 2 = {1,3}, ..., 6 = {3,4}.
inline constexpr int kSegments = 12;

inline const std::vector<std::vector<std::string>>& caches() {
  static const std::vector<std::vector<std::string>> rows{
      {"A1+B1", "A2+B2", "A3+B3", "A1+A2+A3+2B1+2B2+2B3"},
      {"A1+B1", "A4+B4", "A5+B5", "A1+A4+A5+2B1+2B4+2B5"},
      {"A2+B2", "A4+B4", "A6+B6", "A2+A4+A6+2B2+2B4+2B6"},
      {"A3+B3", "A5+B5", "A6+B6", "A3+A5+A6+2B3+2B5+2B6"},
  };
  return rows;
}

struct DemandCase {
  Demand demand;
  std::vector<std::string> transmissions;
};

inline const std::vector<DemandCase>& cases() {
  static const std::vector<DemandCase> all{
      {{1, 1, 1, 2}, {"B1", "B2", "B4", "A3+2A5+3A6", "A3+3A5+4A6", "A1+A2+A4"}},
      {{1, 1, 2, 2}, {"B1", "A6", "A2+2A4", "A3+2A5", "B2+2B3", "B4+2B5"}},
  };
  return all;
}

/// "A3+2A5" -> coefficient row over (A1..A6, B1..B6).
inline std::vector<PrimeField::Element> parse_row(const PrimeField& F, const std::string& text) {
  std::vector<PrimeField::Element> row(kSegments, 0);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '+') {
      ++i;
      continue;
    }
    std::int64_t coeff = 0;
    bool has_coeff = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      coeff = coeff * 10 + (text[i++] - '0');
      has_coeff = true;
    }
    if (i >= text.size() || (text[i] != 'A' && text[i] != 'B')) throw FormatError("bad fixture term in " + text);
    const int file = text[i++] == 'A' ? 0 : 1;
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) throw FormatError("bad index in " + text);
    const int seg = text[i++] - '0';
    if (seg < 1 || seg > 6) throw FormatError("segment index out of range in " + text);
    auto& slot = row[static_cast<std::size_t>(file * 6 + seg - 1)];
    slot = F.add(slot, F.from_int(has_coeff ? coeff : 1));
  }
  return row;
}

/// True iff user k recovers every segment of its file from exactly its cache
/// rows and the listed transmissions, checked on random GF(5) contents.
inline bool user_decodes(const DemandCase& c, int k, std::uint64_t seed, std::string* why = nullptr) {
  const PrimeField F = make_prime_field(5);
  std::vector<std::string> rows = caches()[static_cast<std::size_t>(k - 1)];
  rows.insert(rows.end(), c.transmissions.begin(), c.transmissions.end());
  Matrix<PrimeField> A(F, rows.size(), kSegments);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto row = parse_row(F, rows[r]);
    for (std::size_t j = 0; j < row.size(); ++j) A.set(r, j, row[j]);
  }
  std::mt19937_64 rng(seed);
  std::vector<PrimeField::Element> truth(kSegments);
  for (auto& v : truth) v = static_cast<PrimeField::Element>(rng() % 5);
  const auto received = multiply(A, std::span<const PrimeField::Element>(truth));

  const int file = c.demand[static_cast<std::size_t>(k - 1)] - 1;
  for (int s = 0; s < 6; ++s) {
    std::vector<PrimeField::Element> unit(kSegments, 0);
    unit[static_cast<std::size_t>(file * 6 + s)] = 1;
    if (!row_space_contains(A, std::span<const PrimeField::Element>(unit))) {
      if (why) *why = "segment " + std::string(1, static_cast<char>('A' + file)) + std::to_string(s + 1) + " not determined";
      return false;
    }
  }
  const auto x = solve_any(A, std::span<const PrimeField::Element>(received));
  for (int s = 0; s < 6; ++s)
    if (x[static_cast<std::size_t>(file * 6 + s)] != truth[static_cast<std::size_t>(file * 6 + s)]) {
      if (why) *why = "recovered value differs";
      return false;
    }
  return true;
}

}  // namespace fixture_2x4

// ---------------------------------------------------------------------------
// (N, K, t) = (3, 4, 2): printed transmission lists
// ---------------------------------------------------------------------------

namespace fixture_3x4 {

struct PrintedCase {
  Demand demand;
  std::map<int, std::vector<std::string>> steps;
};

inline const std::vector<PrintedCase>& cases() {
  static const std::vector<PrintedCase> all{
      {{1, 1, 2, 3},
       {{1, {"A_{3,4}", "B_{1,2}", "B_{1,4}", "B_{2,4}", "C_{1,2}", "C_{1,3}", "C_{2,3}"}},
        {2, {"L[A;{{1,3},{2,3}};1]", "L[A;{{1,4},{2,4}};1]"}}}},
      {{1, 1, 2, 2},
       {{1, {"A_{3,4}", "B_{1,2}", "B_{1,4}", "B_{2,4}"}},
        {2, {"L[A;{{1,3},{2,3}};1]", "L[A;{{1,4},{2,4}};1]"}},
        {4, {"B_{1,3}", "B_{2,3}", "C_{1,2}"}}}},
      {{1, 1, 1, 3},
       {{1, {"A_{3,4}", "C_{1,2}", "C_{1,3}", "C_{2,3}"}},
        {2, {"L[A;{{1,3},{2,3}};1]", "L[A;{{1,4},{2,4}};1]"}},
        {4, {"A_{1,2}", "A_{1,4}", "B_{2,4}"}}}},
  };
  return all;
}

}  // namespace fixture_3x4

/// The log in printed form: uncoded symbols by name, and the parities of one
/// class collapsed to "L[file;{members};count]". Each step's list is sorted
/// by (file, subset), the canonical order.
inline std::map<int, std::vector<std::string>> printed_form(const SchemeParams& p, const EnhancedDemand& e,
                                                            const TransmissionLog& log) {
  std::map<int, std::vector<std::pair<SegmentId, std::string>>> keyed;
  std::map<std::tuple<int, int, UserMask>, int> class_sizes;
  for (const auto& tx : log) {
    if (tx.uncoded())
      keyed[tx.step].emplace_back(SegmentId{tx.file, tx.group}, tx.label);
    else
      ++class_sizes[{tx.step, tx.file, tx.group}];
  }
  for (const auto& [key, count] : class_sizes) {
    const auto [step, file, A] = key;
    const auto members = class_members(p, file, e.set_of(file), A);
    std::string label = "L[" + file_name(file) + ";{";
    for (std::size_t i = 0; i < members.size(); ++i) label += (i ? "," : "") + set_string(members[i].users);
    label += "};" + std::to_string(count) + "]";
    keyed[step].emplace_back(SegmentId{file, members.front().users}, label);
  }
  std::map<int, std::vector<std::string>> out;
  for (auto& [step, items] : keyed) {
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
    for (auto& [seg, label] : items) out[step].push_back(label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

namespace detail {

inline ExampleCheck sweep_check(const std::string& name, const Scheme& s, const std::vector<Demand>& demands) {
  const auto results = run_demands(s, demands);
  std::size_t good = 0, total = 0;
  for (const auto& r : results)
    for (const auto& u : r.users) {
      ++total;
      if (r.replay_ok && u.decoded && u.oracle && u.counts_match && u.block_structure) ++good;
    }
  return {name, good == total, std::to_string(good) + "/" + std::to_string(total) + " (demand, user) pairs decode"};
}

}  // namespace detail

inline ExampleReport reproduce_2x4(std::uint64_t seed = 1) {
  ExampleReport rep{"2x4", {}};
  for (const auto& c : fixture_2x4::cases()) {
    bool all = true;
    std::string detail;
    for (int k = 1; k <= 4; ++k) {
      std::string why;
      if (!fixture_2x4::user_decodes(c, k, seed + static_cast<std::uint64_t>(k), &why)) {
        all = false;
        detail += "user " + std::to_string(k) + ": " + why + "; ";
      }
    }
    rep.checks.push_back({"GF(5) fixture " + demand_letters(c.demand), all, all ? "all 4 users decode" : detail});
  }
  const SchemeParams p(2, 4, 2);
  const Scheme s(p, CacheVariant::SemiSystematic, auto_field(p, CacheVariant::SemiSystematic), seed);
  rep.checks.push_back({"cache symbols per user", s.caches().front().symbols.size() == 4,
                        std::to_string(s.caches().front().symbols.size()) + " symbols"});
  rep.checks.push_back(detail::sweep_check("semi-systematic pipeline, all demands", s, all_demand_vectors(2, 4)));
  return rep;
}

inline ExampleReport reproduce_3x4(std::uint64_t seed = 1) {
  ExampleReport rep{"3x4", {}};
  const SchemeParams p(3, 4, 2);
  const PrimeField F = make_prime_field(static_cast<std::int64_t>(auto_field(p, CacheVariant::SemiSystematic).q));
  for (const auto& c : fixture_3x4::cases()) {
    const auto e = enhance(p, c.demand);
    const auto printed = printed_form(p, e, plan_delivery(p, F, e));
    const bool same = printed == c.steps;
    std::string detail;
    for (const auto& [step, labels] : printed) {
      detail += "step " + std::to_string(step) + ":";
      for (const auto& l : labels) detail += " " + l;
      detail += "; ";
    }
    rep.checks.push_back({"printed lists " + demand_letters(c.demand), same, detail});
  }
  const Scheme s(p, CacheVariant::SemiSystematic, auto_field(p, CacheVariant::SemiSystematic), seed);
  std::vector<Demand> demands;
  for (const auto& c : fixture_3x4::cases()) demands.push_back(c.demand);
  rep.checks.push_back(detail::sweep_check("semi-systematic pipeline, printed demands", s, demands));
  return rep;
}

inline ExampleReport reproduce_3x6(std::uint64_t seed = 1) {
  ExampleReport rep{"3x6", {}};
  const SchemeParams p(3, 6, 3);
  const Demand d{1, 1, 1, 2, 2, 3};
  const auto e = enhance(p, d);
  const Scheme s(p, CacheVariant::SemiSystematic, auto_field(p, CacheVariant::SemiSystematic), seed);
  const auto log = deliver(s.library(), e);

  // file-A parities over classes with two users outside {1,2,3}
  std::size_t pair_parities = 0;
  for (const auto& tx : log)
    if (tx.step == 2 && tx.file == 1 && set_size(tx.group) == 2) ++pair_parities;
  rep.checks.push_back({"file-A pair-class parities sent", pair_parities == 6, std::to_string(pair_parities) + " symbols"});

  for (int k = 4; k <= 6; ++k) {
    // interference rows of file A at user k: segments whose subset meets {4,5,6} in two users including k
    std::vector<std::string> table;
    for (const auto& seg : user_basis(p, k))
      if (seg.file == 1 && set_size(seg.users & 0b111000U) == 2) table.push_back(segment_label(seg));
    const auto sys = collect(p, k, log, s.cache(k));
    std::vector<std::size_t> cols, rows;
    for (std::size_t j = 0; j < sys.G.cols(); ++j) {
      if (sys.provenance[j] != Provenance::Step2) continue;
      const auto& tx = log[static_cast<std::size_t>(sys.log_index[j])];
      if (tx.file == 1 && set_size(tx.group) == 2) cols.push_back(j);
    }
    for (std::size_t r = 0; r < sys.basis.size(); ++r)
      if (sys.basis[r].file == 1 && set_size(sys.basis[r].users & 0b111000U) == 2) rows.push_back(r);
    const auto block = select_columns(select_rows(sys.G, rows), cols);
    const std::size_t reduction = rank(block);
    rep.checks.push_back({"user " + std::to_string(k) + " interference reduction", table.size() == 6 && reduction == 4,
                          std::to_string(table.size()) + " interfering segments, rank " + std::to_string(reduction) +
                              " from " + std::to_string(cols.size()) + " symbols"});
  }
  rep.checks.push_back(detail::sweep_check("semi-systematic pipeline " + demand_letters(d), s, {d}));
  return rep;
}

inline ExampleReport reproduce_example(const std::string& name, std::uint64_t seed = 1) {
  if (name == "2x4") return reproduce_2x4(seed);
  if (name == "3x4") return reproduce_3x4(seed);
  if (name == "3x6") return reproduce_3x6(seed);
  throw UnknownExample("unknown example '" + name + "' (expected 2x4, 3x4 or 3x6)");
}

}  // namespace cachecode

#endif  // CACHECODE_WORKED_EXAMPLES_HPP
