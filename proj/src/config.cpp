#include "hbsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "hbsim/csv.hpp"
#include "hbsim/datacenter.hpp"
#include "hbsim/errors.hpp"

namespace hbsim {

std::uint32_t ExperimentConfig::subscriptions_per_node() const noexcept {
  return subscriptions.value_or(default_subscriptions(nodes));
}

namespace {

struct Violation {
  std::string_view key;
  std::string message;
};

std::optional<Violation> find_violation(const ExperimentConfig& c) {
  using V = std::optional<Violation>;
  if (c.nodes == 0) return V({"nodes", "nodes must be at least 1"});
  if (c.subscriptions && *c.subscriptions > c.nodes - 1) {
    return V({"subscriptions",
              "subscriptions (" + std::to_string(*c.subscriptions) +
                  ") must not exceed nodes - 1 (" +
                  std::to_string(c.nodes - 1) + ")"});
  }
  const auto& p = c.protocol;
  if (!(p.staleness_threshold > 0.0)) {
    return V({"staleness_s", "staleness_s must be > 0"});
  }
  if (p.provider_count == 0 || p.provider_count > c.nodes) {
    return V({"provider_count", "provider_count must be in [1, nodes]"});
  }
  if (p.hierarchy_levels < 2) {
    return V({"hierarchy_levels", "hierarchy_levels must be >= 2"});
  }
  if (p.max_requests_per_second && *p.max_requests_per_second == 0) {
    return V({"max_requests_per_s", "max_requests_per_s must be positive"});
  }
  if (!(c.failure.rate_pct_per_min >= 0.0)) {
    return V({"failure_rate_pct_per_min",
              "failure_rate_pct_per_min must be >= 0"});
  }
  if (!(c.failure.gamma_shape > 0.0)) {
    return V({"gamma_shape", "gamma_shape must be > 0"});
  }
  if (c.runs == 0) return V({"runs", "runs must be at least 1"});
  if (!(c.probe_start_s >= 0.0)) {
    return V({"probe_start_s", "probe_start_s must be >= 0"});
  }
  if (!(c.probe_interval_s > 0.0)) {
    return V({"probe_interval_s", "probe_interval_s must be > 0"});
  }
  if (!(c.duration_s > c.probe_start_s)) {
    return V({"duration_s", "duration_s must exceed probe_start_s"});
  }
  // A zero update gap would let one instant fire update events forever.
  if (!(c.update_min_s > 0.0)) {
    return V({"update_min_s", "update_min_s must be > 0"});
  }
  if (!(c.update_min_s <= c.update_max_s)) {
    return V({"update_max_s", "update_min_s must not exceed update_max_s"});
  }
  if (!(c.load_window_s > 0.0)) {
    return V({"load_window_s", "load_window_s must be > 0"});
  }
  return std::nullopt;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (auto v = find_violation(*this)) throw ConfigError(0, v->message);
}

std::string ExperimentConfig::fingerprint() const {
  std::string out;
  out += "nodes=" + std::to_string(nodes);
  out += ";subscriptions=" + std::to_string(subscriptions_per_node());
  out += ";protocol=" + std::string(to_string(protocol.kind));
  out += ";staleness_s=" + format_number(protocol.staleness_threshold);
  out += ";provider_count=" + std::to_string(protocol.provider_count);
  out += ";hierarchy_levels=" + std::to_string(protocol.hierarchy_levels);
  out += ";max_requests_per_s=" +
         (protocol.max_requests_per_second
              ? std::to_string(*protocol.max_requests_per_second)
              : std::string("none"));
  out += ";failure_rate_pct_per_min=" + format_number(failure.rate_pct_per_min);
  out += ";gamma_shape=" + format_number(failure.gamma_shape);
  out += ";repair_policy=" + std::string(to_string(failure.repair_policy));
  out += ";duration_s=" + format_number(duration_s);
  out += ";runs=" + std::to_string(runs);
  out += ";seed=" + std::to_string(seed);
  out += ";probe_start_s=" + format_number(probe_start_s);
  out += ";probe_interval_s=" + format_number(probe_interval_s);
  out += ";update_min_s=" + format_number(update_min_s);
  out += ";update_max_s=" + format_number(update_max_s);
  out += ";load_window_s=" + format_number(load_window_s);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view value, std::size_t line, std::string_view key) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw ConfigError(line, "invalid value '" + std::string(value) +
                                "' for " + std::string(key));
  }
  return out;
}

std::uint32_t parse_count(std::string_view v, std::size_t line,
                          std::string_view key) {
  return parse_number<std::uint32_t>(v, line, key);
}

double parse_real(std::string_view v, std::size_t line, std::string_view key) {
  const double x = parse_number<double>(v, line, key);
  if (!std::isfinite(x)) {
    throw ConfigError(line, std::string(key) + " must be finite");
  }
  return x;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  using Setter = std::function<void(std::string_view, std::size_t)>;
  const std::map<std::string_view, Setter> setters{
      {"nodes",
       [&](auto v, auto l) { cfg.nodes = parse_count(v, l, "nodes"); }},
      {"subscriptions",
       [&](auto v, auto l) {
         cfg.subscriptions = parse_count(v, l, "subscriptions");
       }},
      {"protocol",
       [&](auto v, auto l) {
         const auto kind = parse_protocol_kind(v);
         if (!kind) {
           throw ConfigError(l, "unknown protocol '" + std::string(v) + "'");
         }
         cfg.protocol.kind = *kind;
       }},
      {"staleness_s",
       [&](auto v, auto l) {
         cfg.protocol.staleness_threshold = parse_real(v, l, "staleness_s");
       }},
      {"provider_count",
       [&](auto v, auto l) {
         cfg.protocol.provider_count = parse_count(v, l, "provider_count");
       }},
      {"hierarchy_levels",
       [&](auto v, auto l) {
         cfg.protocol.hierarchy_levels = parse_count(v, l, "hierarchy_levels");
       }},
      {"max_requests_per_s",
       [&](auto v, auto l) {
         cfg.protocol.max_requests_per_second =
             parse_count(v, l, "max_requests_per_s");
       }},
      {"failure_rate_pct_per_min",
       [&](auto v, auto l) {
         cfg.failure.rate_pct_per_min =
             parse_real(v, l, "failure_rate_pct_per_min");
       }},
      {"gamma_shape",
       [&](auto v, auto l) {
         cfg.failure.gamma_shape = parse_real(v, l, "gamma_shape");
       }},
      {"repair_policy",
       [&](auto v, auto l) {
         const auto policy = parse_repair_policy(v);
         if (!policy) {
           throw ConfigError(l, "unknown repair_policy '" + std::string(v) +
                                    "'");
         }
         cfg.failure.repair_policy = *policy;
       }},
      {"duration_s",
       [&](auto v, auto l) { cfg.duration_s = parse_real(v, l, "duration_s"); }},
      {"runs", [&](auto v, auto l) { cfg.runs = parse_count(v, l, "runs"); }},
      {"seed",
       [&](auto v, auto l) {
         cfg.seed = parse_number<std::uint64_t>(v, l, "seed");
       }},
      {"probe_start_s",
       [&](auto v, auto l) {
         cfg.probe_start_s = parse_real(v, l, "probe_start_s");
       }},
      {"probe_interval_s",
       [&](auto v, auto l) {
         cfg.probe_interval_s = parse_real(v, l, "probe_interval_s");
       }},
      {"update_min_s",
       [&](auto v, auto l) {
         cfg.update_min_s = parse_real(v, l, "update_min_s");
       }},
      {"update_max_s",
       [&](auto v, auto l) {
         cfg.update_max_s = parse_real(v, l, "update_max_s");
       }},
      {"load_window_s",
       [&](auto v, auto l) {
         cfg.load_window_s = parse_real(v, l, "load_window_s");
       }},
  };

  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "expected key=value, got '" +
                                     std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto setter = setters.find(key);
    if (setter == setters.end()) {
      throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
    }
    if (!seen.emplace(std::string(key), line_no).second) {
      throw ConfigError(line_no, "duplicate key '" + std::string(key) + "'");
    }
    setter->second(value, line_no);
  }

  if (!seen.count("nodes")) throw ConfigError(0, "missing required key 'nodes'");
  if (auto v = find_violation(cfg)) {
    const auto at = seen.find(std::string(v->key));
    throw ConfigError(at == seen.end() ? 0 : at->second, v->message);
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  line("nodes", std::to_string(cfg.nodes));
  if (cfg.subscriptions) line("subscriptions", std::to_string(*cfg.subscriptions));
  line("protocol", std::string(to_string(cfg.protocol.kind)));
  line("staleness_s", format_number(cfg.protocol.staleness_threshold));
  line("provider_count", std::to_string(cfg.protocol.provider_count));
  line("hierarchy_levels", std::to_string(cfg.protocol.hierarchy_levels));
  if (cfg.protocol.max_requests_per_second) {
    line("max_requests_per_s", std::to_string(*cfg.protocol.max_requests_per_second));
  }
  line("failure_rate_pct_per_min", format_number(cfg.failure.rate_pct_per_min));
  line("gamma_shape", format_number(cfg.failure.gamma_shape));
  line("repair_policy", std::string(to_string(cfg.failure.repair_policy)));
  line("duration_s", format_number(cfg.duration_s));
  line("runs", std::to_string(cfg.runs));
  line("seed", std::to_string(cfg.seed));
  line("probe_start_s", format_number(cfg.probe_start_s));
  line("probe_interval_s", format_number(cfg.probe_interval_s));
  line("update_min_s", format_number(cfg.update_min_s));
  line("update_max_s", format_number(cfg.update_max_s));
  line("load_window_s", format_number(cfg.load_window_s));
  return out;
}

}  // namespace hbsim
