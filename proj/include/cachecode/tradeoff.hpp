#ifndef CACHECODE_TRADEOFF_HPP
#define CACHECODE_TRADEOFF_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cachecode/errors.hpp"
#include "cachecode/rational.hpp"

namespace cachecode {

struct TradeoffPoint {
  Rational M;
  Rational R;
  std::string source;

  bool operator==(const TradeoffPoint&) const = default;
};

/// (t[(N-1)t + K - N] / (K(K-1)), N(K - t)/K) for t = 0..K.
inline std::vector<TradeoffPoint> interference_elimination_points(int N, int K) {
  if (N < 1 || K < 1) throw InvalidParams("need N, K >= 1");
  if (N > K) throw InvalidParams("the scheme needs N <= K");
  std::vector<TradeoffPoint> out;
  if (K == 1) {
    out.push_back({Rational(0), Rational(N), "interference-elimination:t=0"});
    out.push_back({Rational(N), Rational(0), "interference-elimination:t=1"});
    return out;
  }
  for (int t = 0; t <= K; ++t) {
    const Rational M(static_cast<std::int64_t>(t) * ((N - 1) * t + K - N), static_cast<std::int64_t>(K) * (K - 1));
    const Rational R(static_cast<std::int64_t>(N) * (K - t), K);
    out.push_back({M, R, "interference-elimination:t=" + std::to_string(t)});
  }
  return out;
}

/// R = K(1 - M/N) min{1/(1 + KM/N), N/K} on the grid M = iN/K, i = 0..K.
inline std::vector<TradeoffPoint> uncoded_placement_points(int N, int K) {
  if (N < 1 || K < 1) throw InvalidParams("need N, K >= 1");
  std::vector<TradeoffPoint> out;
  for (int i = 0; i <= K; ++i) {
    const Rational M(static_cast<std::int64_t>(i) * N, K);
    const Rational first = Rational(1) / (Rational(1) + Rational(K) * M / Rational(N));
    const Rational second(N, K);
    const Rational R = Rational(K) * (Rational(1) - M / Rational(N)) * std::min(first, second);
    out.push_back({M, R, "uncoded-placement:i=" + std::to_string(i)});
  }
  return out;
}

/// Sign of the turn o -> a -> b (positive: counter-clockwise).
inline Rational cross(const TradeoffPoint& o, const TradeoffPoint& a, const TradeoffPoint& b) {
  return (a.M - o.M) * (b.R - o.R) - (a.R - o.R) * (b.M - o.M);
}

/// Vertices of the lower convex hull, sorted by M. Collinear interior points
/// are dropped; the surviving vertices are tagged "envelope".
inline std::vector<TradeoffPoint> lower_convex_envelope(std::vector<TradeoffPoint> points) {
  if (points.empty()) throw InvalidParams("envelope of an empty point set");
  std::sort(points.begin(), points.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
    return a.M != b.M ? a.M < b.M : a.R < b.R;
  });
  std::vector<TradeoffPoint> hull;
  for (const auto& p : points) {
    if (!hull.empty() && hull.back().M == p.M) continue;  // keep the lowest R at each M
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= Rational(0)) hull.pop_back();
    hull.push_back(p);
  }
  for (auto& p : hull) p.source = "envelope";
  return hull;
}

/// Envelope height at M; empty outside the envelope's M range.
inline std::optional<Rational> envelope_value(const std::vector<TradeoffPoint>& hull, const Rational& M) {
  if (hull.empty() || M < hull.front().M || M > hull.back().M) return std::nullopt;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[i + 1];
    if (M >= a.M && M <= b.M) return a.R + (b.R - a.R) * (M - a.M) / (b.M - a.M);
  }
  return hull.back().R;
}

inline bool on_envelope(const std::vector<TradeoffPoint>& hull, const Rational& M, const Rational& R) {
  const auto h = envelope_value(hull, M);
  return h && *h == R;
}

inline bool strictly_above_envelope(const std::vector<TradeoffPoint>& hull, const Rational& M, const Rational& R) {
  const auto h = envelope_value(hull, M);
  return h && R > *h;
}

inline constexpr const char* kCsvHeader = "M_num,M_den,R_num,R_den,source,M,R";

inline void write_csv(const std::vector<TradeoffPoint>& points, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& p : points) {
    char dec[64];
    std::snprintf(dec, sizeof dec, "%.12g,%.12g", to_double(p.M), to_double(p.R));
    os << p.M.numerator() << ',' << p.M.denominator() << ',' << p.R.numerator() << ',' << p.R.denominator() << ','
       << p.source << ',' << dec << '\n';
  }
}

inline void export_csv(const std::vector<TradeoffPoint>& points, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_csv(points, os);
  if (!os) throw FormatError("write to " + path + " failed");
}

/// Reads back the exact columns; the decimal columns are ignored.
inline std::vector<TradeoffPoint> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw FormatError("missing tradeoff CSV header");
  std::vector<TradeoffPoint> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[5];
    for (auto& field : f)
      if (!std::getline(ss, field, ',')) throw FormatError("short CSV row: " + line);
    try {
      out.push_back({Rational(std::stoll(f[0]), std::stoll(f[1])), Rational(std::stoll(f[2]), std::stoll(f[3])), f[4]});
    } catch (const std::logic_error&) {
      throw FormatError("bad number in CSV row: " + line);
    }
  }
  return out;
}

/// Two decimal columns "M R", one point per line.
inline void write_gnuplot(const std::vector<TradeoffPoint>& points, std::ostream& os) {
  os << "# M R\n";
  for (const auto& p : points) os << std::setprecision(12) << to_double(p.M) << ' ' << to_double(p.R) << '\n';
}

}  // namespace cachecode

#endif  // CACHECODE_TRADEOFF_HPP
