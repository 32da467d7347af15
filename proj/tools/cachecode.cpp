// Command-line front end: simulate, verify, tradeoff, reproduce-example.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cachecode/cachecode.hpp"

namespace cc = cachecode;
using nlohmann::json;

namespace {

struct RunConfig {
  int N = 2;
  int K = 4;
  int t = 2;
  std::optional<std::int64_t> q;
  std::optional<int> m;
  std::string variant = "rank-metric";
  std::uint64_t seed = 1;
  std::string demand = "all";
  std::string input;
  std::string output;
  std::string log_path;
  std::string report_path;
  int search_attempts = 100;
  std::string search_scope = "surjective";
  bool skip_oracle = false;
};

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("-N", cfg.N, "number of files")->required();
  cmd->add_option("-K", cfg.K, "number of users")->required();
  cmd->add_option("-t", cfg.t, "placement parameter, 1 <= t <= K-1")->required();
  cmd->add_option("--q", cfg.q, "base field prime (default: smallest compliant)");
  cmd->add_option("--m", cfg.m, "extension degree (default: code length of the variant)");
  cmd->add_option("--variant", cfg.variant, "rank-metric | semi-systematic | generic")
      ->check(CLI::IsMember({"rank-metric", "semi-systematic", "generic"}));
  cmd->add_option("--seed", cfg.seed, "seed for field, library and generic search");
  cmd->add_option("--demand", cfg.demand, "comma-separated file indices, 'all' or 'surjective'");
  cmd->add_option("--report", cfg.report_path, "write the JSON report here");
  cmd->add_option("--search-attempts", cfg.search_attempts, "generic search budget over all users");
  cmd->add_option("--search-scope", cfg.search_scope, "demands a generic encoder must serve: surjective | all")
      ->check(CLI::IsMember({"surjective", "all"}));
}

std::vector<cc::Demand> parse_demands(const RunConfig& cfg) {
  if (cfg.demand == "all") return cc::all_demand_vectors(cfg.N, cfg.K);
  if (cfg.demand == "surjective") return cc::surjective_demand_vectors(cfg.N, cfg.K);
  cc::Demand d;
  std::stringstream ss(cfg.demand);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      d.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
      throw cc::InvalidParams("bad demand entry '" + item + "'");
    }
  }
  return {d};
}

/// Encoders for the generic variant; empty for the others.
std::vector<cc::Matrix<cc::PrimeField>> generic_encoders(const RunConfig& cfg, const cc::SchemeParams& p,
                                                         const cc::FieldChoice& fc, json& meta) {
  if (cc::parse_variant(cfg.variant) != cc::CacheVariant::Generic) return {};
  const auto scope = cfg.search_scope == "all" ? cc::DemandScope::All : cc::DemandScope::Surjective;
  auto res = cc::generic_code_search(p, cc::make_prime_field(fc.q), cfg.seed, cfg.search_attempts, scope);
  if (!res.warning.empty()) std::cerr << "warning: " << res.warning << '\n';
  meta["generic_search"] = {{"attempts", res.attempts},
                            {"attempts_per_user", res.attempts_per_user},
                            {"demands_verified", res.demands_verified},
                            {"scope", cfg.search_scope}};
  return std::move(res.encoders);
}

json params_json(const RunConfig& cfg, const cc::SchemeParams& p, const cc::FieldChoice& fc) {
  return {{"N", p.N()}, {"K", p.K()},     {"t", p.t()},     {"q", fc.q},
          {"m", fc.m},  {"variant", cfg.variant}, {"seed", cfg.seed}};
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream os(path);
  if (!os) throw cc::FormatError("cannot write " + path);
  os << j.dump(2) << '\n';
}

int run_sweep(const RunConfig& cfg, bool verbose) {
  const cc::SchemeParams p(cfg.N, cfg.K, cfg.t);
  const auto variant = cc::parse_variant(cfg.variant);
  const auto fc = cc::auto_field(p, variant, cfg.q, cfg.m);
  json report{{"schema_version", 1}};
  const auto encoders = generic_encoders(cfg, p, fc, report);
  const cc::Scheme scheme(p, variant, fc, cfg.seed, variant == cc::CacheVariant::Generic ? &encoders : nullptr);
  const auto demands = parse_demands(cfg);
  for (const auto& d : demands) cc::validate_demand(p, d);

  cc::RunOptions opt;
  opt.oracle = !cfg.skip_oracle;
  const auto results = cc::run_demands(scheme, demands, opt);

  const auto expected_log = p.N() * cc::binom(p.K() - 1, p.t());
  std::size_t pairs = 0, passed = 0;
  bool sizes_ok = true;
  json rows = json::array();
  for (const auto& r : results) {
    sizes_ok = sizes_ok && static_cast<std::int64_t>(r.log_size) == expected_log;
    for (const auto& u : r.users) {
      ++pairs;
      const bool good = r.replay_ok && u.decoded && u.oracle && u.counts_match && u.block_structure;
      if (good) ++passed;
      rows.push_back(cc::to_json(u));
      if (verbose)
        std::cout << cc::demand_letters(r.demand) << " user " << u.user << ": " << (good ? "ok" : "FAILED")
                  << " (received " << u.symbols_received << ", cached " << u.symbols_cached << ", rank " << u.g_rank
                  << (u.error.empty() ? "" : ", " + u.error) << ")\n";
    }
  }
  const cc::Rational measured_rate(static_cast<std::int64_t>(results.empty() ? 0 : results.front().log_size),
                                   p.segments_per_file());
  report["params"] = params_json(cfg, p, fc);
  report["memory"] = cc::to_string(scheme.measured_memory());
  report["rate"] = cc::to_string(measured_rate);
  report["results"] = std::move(rows);
  report["summary"] = {{"demands", results.size()}, {"pairs", pairs}, {"passed", passed}, {"log_sizes_ok", sizes_ok}};
  write_json(cfg.report_path, report);

  if (!cfg.log_path.empty() && !results.empty()) {
    std::ofstream os(cfg.log_path);
    if (!os) throw cc::FormatError("cannot write " + cfg.log_path);
    cc::export_log_jsonl(cc::deliver(scheme.library(), demands.front()), scheme.field(), os);
  }

  std::cout << "(N,K,t) = (" << p.N() << "," << p.K() << "," << p.t() << "), " << cfg.variant << ", q = " << fc.q
            << ", m = " << fc.m << '\n';
  std::cout << "symbols sent per demand: " << (results.empty() ? 0 : results.front().log_size) << " (expected "
            << expected_log << ")\n";
  std::cout << "(M,R) = (" << cc::to_string(scheme.measured_memory()) << "," << cc::to_string(measured_rate) << ")\n";
  std::cout << passed << "/" << pairs << " (demand, user) pairs decoded and confirmed by the oracle\n";
  return passed == pairs && sizes_ok ? 0 : 1;
}

/// Delivers real files for one demand; writes each user's reconstruction.
int run_files(const RunConfig& cfg) {
  const cc::SchemeParams p(cfg.N, cfg.K, cfg.t);
  const auto variant = cc::parse_variant(cfg.variant);
  const auto fc = cc::auto_field(p, variant, cfg.q, cfg.m);
  json meta{{"schema_version", 1}};
  const auto encoders = generic_encoders(cfg, p, fc, meta);
  const auto ext = cc::ExtField::with_degree(cc::make_prime_field(fc.q), fc.m, cfg.seed);
  const auto files = cc::ingest_directory(p, ext, cfg.input);
  const auto demands = parse_demands(cfg);
  if (demands.size() != 1) throw cc::InvalidParams("--input needs one explicit demand vector");
  const auto& d = demands.front();
  const auto e = cc::enhance(p, d);

  // recovered[k-1][slice] = segments of user k's file
  std::vector<std::vector<std::vector<cc::ExtElement>>> recovered(static_cast<std::size_t>(p.K()));
  std::size_t sent = 0;
  for (const auto& slice : files.slices) {
    const cc::Scheme scheme(slice, variant, variant == cc::CacheVariant::Generic ? &encoders : nullptr);
    const auto log = cc::deliver(scheme.library(), e);
    sent += log.size();
    const auto ctx = scheme.context();
    for (int k = 1; k <= p.K(); ++k)
      recovered[static_cast<std::size_t>(k - 1)].push_back(cc::reconstruct_file(ctx, k, e, log, scheme.cache(k)));
  }
  if (!cfg.output.empty()) std::filesystem::create_directories(cfg.output);
  bool all = true;
  for (int k = 1; k <= p.K(); ++k) {
    const int n = d[static_cast<std::size_t>(k - 1)];
    const auto bytes = cc::reassemble_file(files, n, recovered[static_cast<std::size_t>(k - 1)]);
    const auto original = cc::read_file_bytes(std::filesystem::path(cfg.input) / files.names[static_cast<std::size_t>(n - 1)]);
    const bool same = bytes == original;
    all = all && same;
    std::cout << "user " << k << " <- " << files.names[static_cast<std::size_t>(n - 1)] << ": "
              << (same ? "identical" : "MISMATCH") << '\n';
    if (!cfg.output.empty())
      cc::write_file_bytes(std::filesystem::path(cfg.output) / ("user" + std::to_string(k) + "_" +
                                                                files.names[static_cast<std::size_t>(n - 1)]),
                           bytes);
  }
  if (!cfg.output.empty()) {
    std::ofstream os(std::filesystem::path(cfg.output) / "library.json");
    os << cc::sidecar(files, cfg.seed, variant).dump(2) << '\n';
  }
  std::cout << files.slices.size() << " slices, " << sent << " symbols sent\n";
  return all ? 0 : 1;
}

int run_tradeoff(int N, int K, const std::string& out, const std::string& gnuplot, const std::string& reference) {
  auto points = cc::interference_elimination_points(N, K);
  const auto baseline = cc::uncoded_placement_points(N, K);
  auto all = points;
  all.insert(all.end(), baseline.begin(), baseline.end());
  const auto hull = cc::lower_convex_envelope(all);
  all.insert(all.end(), hull.begin(), hull.end());
  if (!reference.empty()) {
    std::ifstream is(reference);
    if (!is) throw cc::FormatError("cannot read " + reference);
    const auto extra = cc::parse_csv(is);
    all.insert(all.end(), extra.begin(), extra.end());
  }
  if (out.empty())
    cc::write_csv(all, std::cout);
  else
    cc::export_csv(all, out);
  if (!gnuplot.empty()) {
    std::ofstream os(gnuplot);
    if (!os) throw cc::FormatError("cannot write " + gnuplot);
    cc::write_gnuplot(hull, os);
  }
  return 0;
}

int run_example(const std::string& name, std::uint64_t seed, const std::string& report_path) {
  const auto rep = cc::reproduce_example(name, seed);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    std::cout << (c.ok ? "ok     " : "FAILED ") << c.name << ": " << c.detail << '\n';
    checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  }
  write_json(report_path, {{"schema_version", 1}, {"example", name}, {"ok", rep.ok()}, {"checks", checks}});
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded caching with rank-metric placement and multicast delivery"};
  app.require_subcommand(1);

  RunConfig sim, ver;
  auto* simulate = app.add_subcommand("simulate", "place, deliver and decode for the given demand(s)");
  add_run_options(simulate, sim);
  simulate->add_option("--input", sim.input, "directory holding exactly N files to deliver");
  simulate->add_option("--output", sim.output, "directory for reconstructed files (with --input)");
  simulate->add_option("--log", sim.log_path, "JSON-lines log of the first demand");

  auto* verify = app.add_subcommand("verify", "exhaustive sweep with decoder and oracle per user");
  add_run_options(verify, ver);
  verify->add_flag("--skip-oracle", ver.skip_oracle, "skip the row-space oracle");

  int tN = 0, tK = 0;
  std::string t_out, t_gnuplot, t_reference;
  auto* tradeoff = app.add_subcommand("tradeoff", "tradeoff points and their lower convex envelope as CSV");
  tradeoff->add_option("-N", tN, "number of files")->required();
  tradeoff->add_option("-K", tK, "number of users")->required();
  tradeoff->add_option("--output", t_out, "CSV path (default: stdout)");
  tradeoff->add_option("--gnuplot", t_gnuplot, "two-column envelope for plotting");
  tradeoff->add_option("--reference", t_reference, "extra CSV points to include, e.g. an outer bound");

  std::string ex_name, ex_report;
  std::uint64_t ex_seed = 1;
  auto* example = app.add_subcommand("reproduce-example", "run a worked example: 2x4, 3x4 or 3x6");
  example->add_option("name", ex_name, "example name")->required();
  example->add_option("--seed", ex_seed, "library seed");
  example->add_option("--report", ex_report, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (!sim.input.empty()) return run_files(sim);
      return run_sweep(sim, true);
    }
    if (verify->parsed()) return run_sweep(ver, false);
    if (tradeoff->parsed()) return run_tradeoff(tN, tK, t_out, t_gnuplot, t_reference);
    if (example->parsed()) return run_example(ex_name, ex_seed, ex_report);
  } catch (const cc::Error& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
