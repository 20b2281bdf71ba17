// Acceptance harness. Prints one PASS/FAIL line per criterion. Exits zero
// only when the set of failing criteria equals the --expect-fail list
// (empty by default). Tolerances are fixed here.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hbsim/config.hpp"
#include "hbsim/csv.hpp"
#include "hbsim/output.hpp"
#include "hbsim/simulation.hpp"
#include "hbsim/statistics.hpp"
#include "hbsim/sweep.hpp"
#include "reference_simulator.hpp"

using namespace hbsim;
namespace fs = std::filesystem;

namespace {

constexpr double kDeterminismBudgetS = 10.0;
constexpr double kGridBudgetS = 300.0;
constexpr double kRatioLow = 4.0;
constexpr double kRatioHigh = 25.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string name(ProtocolKind kind) { return std::string(to_string(kind)); }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

const std::vector<ProtocolKind> kAll{ProtocolKind::central,
                                     ProtocolKind::hierarchical,
                                     ProtocolKind::simple_p2p,
                                     ProtocolKind::transitive_p2p};
const std::vector<ProtocolKind> kP2p{ProtocolKind::simple_p2p,
                                     ProtocolKind::transitive_p2p};

Verdict determinism() {
  ExperimentConfig cfg;
  cfg.nodes = 1000;
  cfg.protocol.kind = ProtocolKind::simple_p2p;
  cfg.failure.rate_pct_per_min = 1.0;
  cfg.duration_s = 60.0;
  cfg.seed = 7;

  const fs::path root = fs::temp_directory_path() / "hbsim_acceptance_det";
  fs::remove_all(root);
  double slowest = 0.0;
  for (const char* sub : {"a", "b"}) {
    const auto start = Clock::now();
    const std::vector<ExperimentConfig> one{cfg};
    auto res = run_sweep(one, SweepOptions{1, true});
    if (!res[0].summary) return {false, "run failed: " + res[0].error};
    const std::vector<SweepSummary> sums{*res[0].summary};
    write_outputs(res[0].outputs, sums, (root / sub).string());
    slowest = std::max(slowest, seconds_since(start));
  }
  for (const char* f : {"probes.csv", "failures.csv", "load.csv"}) {
    if (read_text_file((root / "a" / f).string()) !=
        read_text_file((root / "b" / f).string())) {
      return {false, std::string(f) + " differs"};
    }
  }
  fs::remove_all(root);
  return {slowest < kDeterminismBudgetS,
          "identical outputs, slowest run " + fmt("%.2f s", slowest)};
}

Verdict zero_failure_soundness() {
  std::size_t probes = 0;
  for (std::uint32_t n : {100u, 1000u}) {
    for (auto kind : kAll) {
      ExperimentConfig cfg;
      cfg.nodes = n;
      cfg.protocol.kind = kind;
      cfg.duration_s = 120.0;
      const RunOutput out = run_one(cfg, 0);
      for (const auto& p : out.probes) {
        if (p.inconsistent_nodes != 0) {
          return {false, name(kind) + " n=" + std::to_string(n) +
                             " nonzero at t=" + format_number(p.t)};
        }
      }
      probes += out.probes.size();
    }
  }
  return {true, std::to_string(probes) + " probes, all zero"};
}

Verdict in_degree_oracle() {
  for (NodeId victim : {0u, 17u, 42u, 99u}) {
    ExperimentConfig cfg;
    cfg.nodes = 100;
    cfg.protocol.kind = ProtocolKind::simple_p2p;
    cfg.duration_s = 30.0;
    Simulation sim(cfg, 0);
    sim.inject_failure(10.0, victim);
    sim.run_until(10.0);

    // Graph scan, independent of the subscriber index.
    std::uint32_t expected = 0;
    const DataCenter& dc = sim.datacenter();
    for (NodeId i = 0; i < dc.size(); ++i) {
      for (const auto& e : dc.subscriptions(i)) {
        if (e.target == victim) ++expected;
      }
    }
    const std::uint32_t measured = dc.count_inconsistent_nodes();
    if (measured != expected) {
      return {false, "victim " + std::to_string(victim) + ": measured " +
                         std::to_string(measured) + ", scan " +
                         std::to_string(expected)};
    }
    sim.run();
    for (const auto& p : sim.probes()) {
      if (p.t >= 10.0 + cfg.update_max_s && p.inconsistent_nodes != 0) {
        return {false, "nonzero probe at t=" + format_number(p.t)};
      }
    }
  }
  return {true, "4 victims, count equals in-degree, zero from t=11.2"};
}

Verdict reference_equivalence() {
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (auto kind : kP2p) {
      ExperimentConfig cfg;
      cfg.nodes = 10 + static_cast<std::uint32_t>(seed % 41);  // 10..50
      cfg.subscriptions = 1 + static_cast<std::uint32_t>(seed % 7);  // 1..7
      cfg.protocol.kind = kind;
      cfg.failure.rate_pct_per_min = 10.0 + double(seed % 3) * 20.0;
      cfg.duration_s = 60.0;
      cfg.seed = seed;
      const RunOutput out = run_one(cfg, 0);
      const auto ref = testing::reference_run(cfg, 0);
      if (out.probes.size() != ref.probe_counts.size()) {
        return {false, "probe count differs for seed " + std::to_string(seed)};
      }
      for (std::size_t i = 0; i < out.probes.size(); ++i) {
        if (out.probes[i].t != ref.probe_times[i] ||
            out.probes[i].inconsistent_nodes != ref.probe_counts[i]) {
          return {false, name(kind) + " seed " + std::to_string(seed) +
                             " differs at t=" + format_number(out.probes[i].t)};
        }
      }
      compared += out.probes.size();
    }
  }
  return {true, std::to_string(compared) + " probe values identical"};
}

struct Grid {
  std::vector<SweepResult> results;
  double elapsed = 0.0;

  const SweepResult& at(std::uint32_t n, double rate, ProtocolKind kind) const {
    for (const auto& r : results) {
      if (r.config.nodes == n && r.config.failure.rate_pct_per_min == rate &&
          r.config.protocol.kind == kind) {
        return r;
      }
    }
    throw std::out_of_range("grid point missing");
  }
};

const std::vector<std::uint32_t> kGridNodes{100, 1000};
const std::vector<double> kGridRates{0.1, 1.0, 10.0};

Grid run_grid() {
  ExperimentConfig base;
  base.runs = 10;
  base.duration_s = 600.0;
  base.seed = 1;
  const auto start = Clock::now();
  Grid g;
  g.results = run_sweep(make_grid(base, kGridNodes, kGridRates, kP2p),
                        SweepOptions{0, true});
  g.elapsed = seconds_since(start);
  return g;
}

Verdict grid_trend(const Grid& g) {
  for (const auto& r : g.results) {
    if (!r.summary) return {false, "grid point failed: " + r.error};
  }
  for (auto kind : kP2p) {
    for (std::uint32_t n : kGridNodes) {
      for (std::size_t i = 0; i + 1 < kGridRates.size(); ++i) {
        const double lo = g.at(n, kGridRates[i], kind).summary->mean;
        const double hi = g.at(n, kGridRates[i + 1], kind).summary->mean;
        if (!(hi > lo)) {
          return {false, name(kind) + " n=" + std::to_string(n) +
                             " not increasing in rate"};
        }
      }
    }
    for (double rate : kGridRates) {
      const double small = g.at(100, rate, kind).summary->mean;
      const double large = g.at(1000, rate, kind).summary->mean;
      if (!(large > small)) {
        return {false, name(kind) + " rate=" + format_number(rate) +
                           " not increasing in n"};
      }
    }
  }
  return {g.elapsed < kGridBudgetS,
          "trends hold, grid took " + fmt("%.1f s", g.elapsed)};
}

Verdict normalized_ratios(const Grid& g) {
  double lo = 1e300;
  double hi = 0.0;
  std::string worst;
  for (auto kind : kP2p) {
    for (std::uint32_t n : kGridNodes) {
      for (std::size_t i = 0; i + 1 < kGridRates.size(); ++i) {
        const auto& a = *g.at(n, kGridRates[i], kind).summary;
        const auto& b = *g.at(n, kGridRates[i + 1], kind).summary;
        const double ratio = b.normalized_mean / a.normalized_mean;
        std::printf("  ratio %-14s n=%-4u %5s->%-5s %8.3f\n",
                    name(kind).c_str(), n,
                    format_number(kGridRates[i]).c_str(),
                    format_number(kGridRates[i + 1]).c_str(), ratio);
        if (!(ratio >= kRatioLow && ratio <= kRatioHigh) && worst.empty()) {
          worst = name(kind) + " n=" + std::to_string(n) + " " +
                  format_number(kGridRates[i]) + "->" +
                  format_number(kGridRates[i + 1]) + fmt(" ratio %.3f", ratio);
        }
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
  }
  const std::string range = fmt("ratios in [%.3f, ", lo) + fmt("%.3f]", hi);
  if (!worst.empty()) return {false, range + ", out of band: " + worst};
  return {true, range};
}

Verdict ci_arithmetic() {
  std::vector<double> ten;
  for (int i = 1; i <= 10; ++i) ten.push_back(i);
  const auto a = ci95_halfwidth(ten);
  const auto b = ci95_halfwidth(std::vector<double>{0.0, 2.0});
  const auto c = ci95_halfwidth(std::vector<double>{3.5, 3.5, 3.5, 3.5});
  const bool ok = a && std::abs(*a - 2.1657) <= 0.0005 && b &&
                  std::abs(*b - 12.706) <= 0.001 && c && *c == 0.0;
  return {ok, fmt("{1..10} -> %.5f, ", a.value_or(-1)) +
                  fmt("{0,2} -> %.4f, ", b.value_or(-1)) +
                  fmt("equal -> %.1f", c.value_or(-1))};
}

Verdict ci_comparison(const Grid& g, bool arithmetic_ok) {
  std::printf("  %-14s %10s %10s %10s %10s\n", "protocol", "mean", "ci95",
              "low", "high");
  std::vector<std::pair<double, double>> intervals;
  for (auto kind : kP2p) {
    const auto& r = g.at(1000, 1.0, kind);
    std::vector<double> means;
    for (const auto& o : r.outputs) means.push_back(o.summary.mean_inconsistent);
    const auto recomputed = ci95_halfwidth(means);
    const auto& s = *r.summary;
    if (means.size() != 10 || !recomputed || !s.ci95_halfwidth ||
        std::abs(*recomputed - *s.ci95_halfwidth) > 1e-12) {
      return {false, "summary CI does not match the per-run recomputation"};
    }
    std::printf("  %-14s %10.4f %10.4f %10.4f %10.4f\n",
                name(kind).c_str(), s.mean, *s.ci95_halfwidth,
                s.mean - *s.ci95_halfwidth, s.mean + *s.ci95_halfwidth);
    intervals.emplace_back(s.mean - *s.ci95_halfwidth,
                           s.mean + *s.ci95_halfwidth);
  }
  const bool disjoint = intervals[0].second < intervals[1].first ||
                        intervals[1].second < intervals[0].first;
  return {arithmetic_ok, std::string("intervals ") +
                             (disjoint ? "distinct" : "overlap") +
                             " (reported only)"};
}

Verdict failure_calibration() {
  ExperimentConfig cfg;
  cfg.nodes = 1000;
  cfg.protocol.kind = ProtocolKind::simple_p2p;
  cfg.failure.rate_pct_per_min = 1.0;
  cfg.duration_s = 3600.0;
  cfg.runs = 10;
  const std::vector<ExperimentConfig> one{cfg};
  const auto res = run_sweep(one, SweepOptions{0, true});
  if (!res[0].summary) return {false, res[0].error};
  double total = 0.0;
  for (const auto& o : res[0].outputs) total += double(o.summary.failure_events);
  const double mean = total / double(res[0].outputs.size());
  const double expected = 600.0;
  // Renewal count variance is about expected / shape for gamma gaps.
  const double tol =
      3.0 * std::sqrt(expected / cfg.failure.gamma_shape) / std::sqrt(10.0);
  return {std::abs(mean - expected) <= tol,
          fmt("mean %.1f events, ", mean) + fmt("band 600 +- %.2f", tol)};
}

Verdict load_accounting() {
  ExperimentConfig cfg;
  cfg.nodes = 100;
  cfg.subscriptions = 10;
  cfg.duration_s = 60.0;
  cfg.protocol.kind = ProtocolKind::simple_p2p;
  const RunOutput simple = run_one(cfg, 0);
  cfg.protocol.kind = ProtocolKind::central;
  const RunOutput central = run_one(cfg, 0);

  const double per_cycle = double(simple.summary.total_messages) /
                           double(simple.summary.update_events);
  const bool ok = per_cycle == 20.0 &&
                  central.summary.total_messages < simple.summary.total_messages;
  return {ok, fmt("%.3f messages per update (2k = 20), ", per_cycle) +
                  "switch central " +
                  std::to_string(central.summary.total_messages) + " vs simple " +
                  std::to_string(simple.summary.total_messages)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hbsim acceptance criteria"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail,
                 "criteria known to fail; the exit code ignores exactly these")
      ->delimiter(',')
      ->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  std::set<int> failed;
  auto report = [&](int id, const char* label, const Verdict& v) {
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id,
                label, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) failed.insert(id);
  };
  auto guarded = [](const std::function<Verdict()>& f) -> Verdict {
    try {
      return f();
    } catch (const std::exception& e) {
      return {false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "determinism", guarded(determinism));
  report(2, "zero-failure soundness", guarded(zero_failure_soundness));
  report(3, "in-degree oracle", guarded(in_degree_oracle));
  report(4, "reference equivalence", guarded(reference_equivalence));

  Grid grid;
  std::string grid_error;
  try {
    grid = run_grid();
  } catch (const std::exception& e) {
    grid_error = e.what();
  }
  auto with_grid = [&](std::function<Verdict()> f) {
    if (!grid_error.empty()) return Verdict{false, "grid failed: " + grid_error};
    return guarded(f);
  };
  report(5, "rate and size trend", with_grid([&] { return grid_trend(grid); }));
  report(6, "normalized order of magnitude",
         with_grid([&] { return normalized_ratios(grid); }));
  const Verdict ci = guarded(ci_arithmetic);
  report(7, "protocol comparison",
         with_grid([&] { return ci_comparison(grid, ci.pass); }));
  report(8, "ci arithmetic", ci);
  report(9, "failure-rate calibration", guarded(failure_calibration));
  report(10, "load accounting", guarded(load_accounting));

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  std::printf("%zu of 10 criteria failed", failed.size());
  if (!expected.empty()) {
    std::printf(" (%zu expected)", expected.size());
  }
  std::printf("\n");
  for (int id : expected) {
    if (!failed.count(id)) {
      std::printf("criterion %d was expected to fail but passed\n", id);
    }
  }
  return failed == expected ? 0 : 1;
}
