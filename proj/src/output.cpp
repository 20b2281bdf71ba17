#include "hbsim/output.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <numeric>

#include "hbsim/csv.hpp"
#include "hbsim/errors.hpp"

namespace hbsim {

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create directory: " + ec.message());
}

std::string join(const std::string& dir, const char* file) {
  return (std::filesystem::path(dir) / file).string();
}

template <typename T>
T field_as(const std::string& s, std::size_t row) {
  T out{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("csv row " + std::to_string(row) + ": bad field '" + s + "'");
  }
  return out;
}

}  // namespace

std::string component_label(Component c) {
  return c.is_switch() ? "switch" : "link:" + std::to_string(c.node());
}

std::string probes_csv(std::span<const RunOutput> outputs) {
  std::string out = "run,t,inconsistent_nodes\n";
  for (const RunOutput& o : outputs) {
    for (const ProbeRecord& p : o.probes) {
      out += std::to_string(p.run) + ',' + format_number(p.t) + ',' +
             std::to_string(p.inconsistent_nodes) + '\n';
    }
  }
  return out;
}

std::string failures_csv(std::span<const RunOutput> outputs) {
  std::string out = "run,t,node,effect,inconsistent_nodes_at_event\n";
  for (const RunOutput& o : outputs) {
    for (const FailureRecord& f : o.failures) {
      out += std::to_string(f.run) + ',' + format_number(f.t) + ',' +
             std::to_string(f.node) + ',' + std::string(to_string(f.effect)) +
             ',' + std::to_string(f.inconsistent_nodes) + '\n';
    }
  }
  return out;
}

std::string load_csv(std::span<const RunOutput> outputs) {
  std::string out = "run,window_start,component,messages,payload_entries\n";
  for (const RunOutput& o : outputs) {
    for (const LoadRecord& l : o.load) {
      if (l.counts.messages == 0 && l.counts.payload_entries == 0) continue;
      out += std::to_string(l.run) + ',' + format_number(l.window_start) + ',' +
             component_label(l.component) + ',' +
             std::to_string(l.counts.messages) + ',' +
             std::to_string(l.counts.payload_entries) + '\n';
    }
  }
  return out;
}

std::string summary_csv(std::span<const SweepSummary> summaries) {
  std::string out =
      "nodes,rate_pct_per_min,protocol,runs,mean,sd,min,max,ci95_halfwidth,"
      "normalized_mean\n";
  for (const SweepSummary& s : summaries) {
    out += std::to_string(s.nodes) + ',' + format_number(s.rate_pct_per_min) +
           ',' + std::string(to_string(s.protocol)) + ',' +
           std::to_string(s.runs) + ',' + format_number(s.mean) + ',' +
           format_number(s.sd) + ',' + format_number(s.min) + ',' +
           format_number(s.max) + ',' +
           (s.ci95_halfwidth ? format_number(*s.ci95_halfwidth) : "") + ',' +
           format_number(s.normalized_mean) + '\n';
  }
  return out;
}

void write_outputs(std::span<const RunOutput> outputs,
                   std::span<const SweepSummary> summaries,
                   const std::string& dir) {
  ensure_dir(dir);
  write_text_file(join(dir, "probes.csv"), probes_csv(outputs));
  write_text_file(join(dir, "failures.csv"), failures_csv(outputs));
  write_text_file(join(dir, "load.csv"), load_csv(outputs));
  if (!summaries.empty()) {
    write_text_file(join(dir, "summary.csv"), summary_csv(summaries));
  }
}

std::string config_label(std::uint32_t nodes, double rate_pct_per_min,
                         ProtocolKind protocol) {
  return "n" + std::to_string(nodes) + "_rate" +
         format_number(rate_pct_per_min) + "_" + std::string(to_string(protocol));
}

PlotTables emit_plot_data(std::span<const SweepSummary> summaries,
                          std::span<const std::vector<ProbeRecord>> series) {
  if (summaries.empty()) throw ParameterError("plot data needs a summary");
  PlotTables t;

  t.mean_ci =
      "nodes,rate_pct_per_min,protocol,mean,ci95_halfwidth,lower,upper\n";
  std::vector<std::size_t> order(summaries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    const auto& x = summaries[a];
    const auto& y = summaries[b];
    if (x.nodes != y.nodes) return x.nodes < y.nodes;
    if (x.rate_pct_per_min != y.rate_pct_per_min) {
      return x.rate_pct_per_min < y.rate_pct_per_min;
    }
    return x.protocol < y.protocol;
  });
  for (std::size_t i : order) {
    const SweepSummary& s = summaries[i];
    const double ci = s.ci95_halfwidth.value_or(0.0);
    t.mean_ci += std::to_string(s.nodes) + ',' +
                 format_number(s.rate_pct_per_min) + ',' +
                 std::string(to_string(s.protocol)) + ',' +
                 format_number(s.mean) + ',' +
                 (s.ci95_halfwidth ? format_number(ci) : "") + ',' +
                 format_number(s.mean - ci) + ',' + format_number(s.mean + ci) +
                 '\n';
  }

  t.normalized = "rate_pct_per_min,nodes,protocol,normalized_mean\n";
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    const auto& x = summaries[a];
    const auto& y = summaries[b];
    if (x.rate_pct_per_min != y.rate_pct_per_min) {
      return x.rate_pct_per_min < y.rate_pct_per_min;
    }
    if (x.nodes != y.nodes) return x.nodes < y.nodes;
    return x.protocol < y.protocol;
  });
  for (std::size_t i : order) {
    const SweepSummary& s = summaries[i];
    t.normalized += format_number(s.rate_pct_per_min) + ',' +
                    std::to_string(s.nodes) + ',' +
                    std::string(to_string(s.protocol)) + ',' +
                    format_number(s.normalized_mean) + '\n';
  }

  t.recovery = "nodes,rate_pct_per_min,protocol,run,t,inconsistent_nodes\n";
  for (std::size_t i = 0; i < summaries.size() && i < series.size(); ++i) {
    const SweepSummary& s = summaries[i];
    const std::string prefix = std::to_string(s.nodes) + ',' +
                               format_number(s.rate_pct_per_min) + ',' +
                               std::string(to_string(s.protocol)) + ',';
    for (const ProbeRecord& p : series[i]) {
      t.recovery += prefix + std::to_string(p.run) + ',' + format_number(p.t) +
                    ',' + std::to_string(p.inconsistent_nodes) + '\n';
    }
  }
  return t;
}

void write_plot_data(const PlotTables& tables, const std::string& dir) {
  ensure_dir(dir);
  write_text_file(join(dir, "plot_mean_ci.csv"), tables.mean_ci);
  write_text_file(join(dir, "plot_normalized.csv"), tables.normalized);
  write_text_file(join(dir, "plot_recovery.csv"), tables.recovery);
}

std::vector<SweepSummary> read_summary_csv(const std::string& text) {
  const CsvTable rows = parse_csv(text);
  std::vector<SweepSummary> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != 10) {
      throw Error("summary.csv row " + std::to_string(r) +
                  ": expected 10 fields");
    }
    SweepSummary s;
    s.nodes = field_as<std::uint32_t>(f[0], r);
    s.rate_pct_per_min = field_as<double>(f[1], r);
    const auto kind = parse_protocol_kind(f[2]);
    if (!kind) throw Error("summary.csv row " + std::to_string(r) +
                           ": unknown protocol '" + f[2] + "'");
    s.protocol = *kind;
    s.runs = field_as<std::uint32_t>(f[3], r);
    s.mean = field_as<double>(f[4], r);
    s.sd = field_as<double>(f[5], r);
    s.min = field_as<double>(f[6], r);
    s.max = field_as<double>(f[7], r);
    if (!f[8].empty()) s.ci95_halfwidth = field_as<double>(f[8], r);
    s.normalized_mean = field_as<double>(f[9], r);
    out.push_back(s);
  }
  return out;
}

std::vector<ProbeRecord> read_probes_csv(const std::string& text) {
  const CsvTable rows = parse_csv(text);
  std::vector<ProbeRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != 3) {
      throw Error("probes.csv row " + std::to_string(r) + ": expected 3 fields");
    }
    out.push_back(ProbeRecord{field_as<std::uint32_t>(f[0], r),
                              field_as<double>(f[1], r),
                              field_as<std::uint32_t>(f[2], r)});
  }
  return out;
}

}  // namespace hbsim
