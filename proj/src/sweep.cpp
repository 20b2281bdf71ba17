#include "hbsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace hbsim {

std::vector<ExperimentConfig> make_grid(const ExperimentConfig& base,
                                        std::span<const std::uint32_t> nodes,
                                        std::span<const double> rates,
                                        std::span<const ProtocolKind> protocols) {
  std::vector<ExperimentConfig> out;
  for (std::uint32_t n : nodes) {
    for (double rate : rates) {
      for (ProtocolKind kind : protocols) {
        ExperimentConfig cfg = base;
        cfg.nodes = n;
        cfg.failure.rate_pct_per_min = rate;
        cfg.protocol.kind = kind;
        out.push_back(std::move(cfg));
      }
    }
  }
  return out;
}

std::vector<SweepResult> run_sweep(std::span<const ExperimentConfig> configs,
                                   const SweepOptions& options) {
  struct Job {
    std::size_t config;
    std::uint32_t run;
  };
  std::vector<SweepResult> results(configs.size());
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    results[c].config = configs[c];
    try {
      configs[c].validate();
    } catch (const std::exception& e) {
      results[c].error = e.what();
      continue;
    }
    results[c].outputs.resize(configs[c].runs);
    for (std::uint32_t r = 0; r < configs[c].runs; ++r) jobs.push_back({c, r});
  }

  // One error slot per job so that workers never share writable state.
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      try {
        RunOutput out = run_one(configs[job.config], job.run);
        if (!options.keep_outputs) {
          out = RunOutput{out.run_index, {}, {}, {}, out.summary};
        }
        results[job.config].outputs[job.run] = std::move(out);
      } catch (const std::exception& e) {
        errors[j] = "run " + std::to_string(job.run) + ": " + e.what();
      }
    }
  };

  unsigned threads = options.threads != 0
                         ? options.threads
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(jobs.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (errors[j].empty()) continue;
    auto& err = results[jobs[j].config].error;
    if (err.empty()) err = errors[j];
  }
  for (SweepResult& r : results) {
    if (r.error.empty()) {
      r.summary = aggregate(r.config, r.outputs);
    } else {
      r.outputs.clear();
    }
    if (!options.keep_outputs) r.outputs.clear();
  }
  return results;
}

}  // namespace hbsim
