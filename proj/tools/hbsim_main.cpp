// Command-line front end: run, sweep, replay and plotdata.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hbsim/config.hpp"
#include "hbsim/csv.hpp"
#include "hbsim/errors.hpp"
#include "hbsim/output.hpp"
#include "hbsim/sweep.hpp"

namespace {

using namespace hbsim;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> runs;
  std::optional<double> duration;

  void apply(ExperimentConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (runs) cfg.runs = *runs;
    if (duration) cfg.duration_s = *duration;
  }
};

void print_table(const std::vector<SweepResult>& results) {
  std::printf("%8s %10s %-15s %5s %12s %12s %12s %12s %12s %12s\n", "nodes",
              "rate%/min", "protocol", "runs", "mean", "sd", "min", "max",
              "ci95", "mean/n");
  for (const SweepResult& r : results) {
    if (!r.summary) {
      std::printf("%8u %10s %-15s  FAILED: %s\n", r.config.nodes,
                  format_number(r.config.failure.rate_pct_per_min).c_str(),
                  std::string(to_string(r.config.protocol.kind)).c_str(),
                  r.error.c_str());
      continue;
    }
    const SweepSummary& s = *r.summary;
    std::printf("%8u %10s %-15s %5u %12.4f %12.4f %12.4f %12.4f %12s %12.6f\n",
                s.nodes, format_number(s.rate_pct_per_min).c_str(),
                std::string(to_string(s.protocol)).c_str(), s.runs, s.mean,
                s.sd, s.min, s.max,
                s.ci95_halfwidth ? std::to_string(*s.ci95_halfwidth).c_str()
                                 : "-",
                s.normalized_mean);
  }
}

std::vector<SweepSummary> summaries_of(const std::vector<SweepResult>& results) {
  std::vector<SweepSummary> out;
  for (const auto& r : results) {
    if (r.summary) out.push_back(*r.summary);
  }
  return out;
}

bool all_ok(const std::vector<SweepResult>& results) {
  for (const auto& r : results) {
    if (!r.summary) return false;
  }
  return true;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const Overrides& ov) {
  ExperimentConfig cfg = load_config_file(config_path);
  ov.apply(cfg);
  cfg.validate();
  const std::vector<ExperimentConfig> configs{cfg};
  const auto results = run_sweep(configs, SweepOptions{0, true});
  if (results[0].summary) {
    write_outputs(results[0].outputs, summaries_of(results), out_dir);
  }
  print_table(results);
  return all_ok(results) ? 0 : 1;
}

int cmd_replay(const std::string& config_path, const std::string& out_dir,
               const Overrides& ov, std::uint32_t run_index) {
  ExperimentConfig cfg = load_config_file(config_path);
  ov.apply(cfg);
  cfg.validate();
  const std::vector<RunOutput> outputs{run_one(cfg, run_index)};
  write_outputs(outputs, {}, out_dir);
  const RunSummary& s = outputs[0].summary;
  std::printf("run %u: mean_inconsistent=%.6f max_inconsistent=%u "
              "messages=%llu payload_entries=%llu failure_events=%llu\n",
              run_index, s.mean_inconsistent, s.max_inconsistent,
              static_cast<unsigned long long>(s.total_messages),
              static_cast<unsigned long long>(s.total_payload_entries),
              static_cast<unsigned long long>(s.failure_events));
  return 0;
}

int cmd_sweep(const std::optional<std::string>& config_path,
              const std::string& out_dir, const Overrides& ov,
              const std::vector<std::uint32_t>& nodes,
              const std::vector<double>& rates,
              const std::vector<std::string>& protocol_names) {
  ExperimentConfig base;
  if (config_path) base = load_config_file(*config_path);
  ov.apply(base);

  std::vector<std::uint32_t> sizes = nodes;
  if (sizes.empty()) {
    if (base.nodes == 0) throw ConfigError(0, "sweep needs --nodes or --config");
    sizes.push_back(base.nodes);
  }
  std::vector<double> rate_list = rates;
  if (rate_list.empty()) rate_list.push_back(base.failure.rate_pct_per_min);
  std::vector<ProtocolKind> kinds;
  for (const auto& name : protocol_names) {
    const auto kind = parse_protocol_kind(name);
    if (!kind) throw ConfigError(0, "unknown protocol '" + name + "'");
    kinds.push_back(*kind);
  }
  if (kinds.empty()) kinds.push_back(base.protocol.kind);

  const auto configs = make_grid(base, sizes, rate_list, kinds);
  const auto results = run_sweep(configs, SweepOptions{0, true});

  std::vector<SweepSummary> summaries;
  std::vector<std::vector<ProbeRecord>> series;
  for (const SweepResult& r : results) {
    if (!r.summary) continue;
    const std::string sub =
        (std::filesystem::path(out_dir) /
         config_label(r.config.nodes, r.config.failure.rate_pct_per_min,
                      r.config.protocol.kind))
            .string();
    write_outputs(r.outputs, std::vector<SweepSummary>{*r.summary}, sub);
    summaries.push_back(*r.summary);
    std::vector<ProbeRecord> probes;
    for (const RunOutput& o : r.outputs) {
      probes.insert(probes.end(), o.probes.begin(), o.probes.end());
    }
    series.push_back(std::move(probes));
  }
  std::filesystem::create_directories(out_dir);
  write_text_file((std::filesystem::path(out_dir) / "summary.csv").string(),
                  summary_csv(summaries));
  if (!summaries.empty()) {
    write_plot_data(emit_plot_data(summaries, series), out_dir);
  }
  print_table(results);
  return all_ok(results) ? 0 : 1;
}

int cmd_plotdata(const std::string& dir) {
  namespace fs = std::filesystem;
  const auto summaries =
      read_summary_csv(read_text_file((fs::path(dir) / "summary.csv").string()));
  std::vector<std::vector<ProbeRecord>> series;
  for (const SweepSummary& s : summaries) {
    fs::path probes = fs::path(dir) /
                      config_label(s.nodes, s.rate_pct_per_min, s.protocol) /
                      "probes.csv";
    if (!fs::exists(probes) && summaries.size() == 1) {
      probes = fs::path(dir) / "probes.csv";
    }
    series.push_back(fs::exists(probes)
                         ? read_probes_csv(read_text_file(probes.string()))
                         : std::vector<ProbeRecord>{});
  }
  write_plot_data(emit_plot_data(summaries, series), dir);
  std::printf("wrote plot tables for %zu configurations to %s\n",
              summaries.size(), dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heartbeat propagation simulator for large data centres"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "results";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> runs;
  std::optional<double> duration;
  std::uint32_t run_index = 0;
  std::vector<std::uint32_t> nodes;
  std::vector<double> rates;
  std::vector<std::string> protocols;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Root seed (overrides config)");
    sub->add_option("--runs", runs, "Runs per configuration")
        ->check(CLI::PositiveNumber);
    sub->add_option("--duration", duration, "Simulated seconds per run")
        ->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run every repetition of one config");
  run->add_option("--config", config_path, "key=value config file")->required();
  add_common(run);

  auto* replay = app.add_subcommand("replay", "Re-run a single repetition");
  replay->add_option("--config", config_path, "key=value config file")
      ->required();
  replay->add_option("--run", run_index, "Run index to reproduce");
  add_common(replay);

  auto* sweep = app.add_subcommand("sweep", "Grid over sizes, rates, protocols");
  sweep->add_option("--config", config_path, "Base config file");
  sweep->add_option("--nodes", nodes, "Data-centre sizes")->delimiter(',');
  sweep->add_option("--rates", rates, "Failure rates in %/min")->delimiter(',');
  sweep->add_option("--protocol", protocols, "Protocols")->delimiter(',');
  add_common(sweep);

  auto* plot = app.add_subcommand("plotdata", "Build plot tables from outputs");
  plot->add_option("--out", out_dir, "Directory holding summary.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  const Overrides ov{seed, runs, duration};
  try {
    if (*run) return cmd_run(config_path, out_dir, ov);
    if (*replay) return cmd_replay(config_path, out_dir, ov, run_index);
    if (*sweep) {
      return cmd_sweep(config_path.empty() ? std::nullopt
                                           : std::optional(config_path),
                       out_dir, ov, nodes, rates, protocols);
    }
    if (*plot) return cmd_plotdata(out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
