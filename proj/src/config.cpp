#include "noether/config.hpp"

#include "noether/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace noether {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double positive(std::string_view text, const std::string& what) {
  const double v = parse_number(text, what);
  if (!(v > 0.0)) throw ConfigError(what + " must be positive");
  return v;
}

int integer(std::string_view text, const std::string& what) {
  int v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) throw ConfigError(what + ": expected an integer, got '" + std::string(t) + "'");
  return v;
}

Vec to_vec(const std::vector<double>& xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
  return v;
}

CustomSystemSpec& custom_named(RunConfig& config, const std::string& name) {
  for (auto& spec : config.custom) {
    if (spec.name == name) return spec;
  }
  CustomSystemSpec spec;
  spec.name = name;
  spec.dim = 0;
  config.custom.push_back(std::move(spec));
  return config.custom.back();
}

void apply(RunConfig& config, const std::string& key, std::string_view value) {
  const auto parts = split(key, '.');
  if (parts.size() == 1) {
    if (key == "entries") {
      config.entries = split_list(value);
      if (config.entries.empty()) throw ConfigError("entries: list is empty");
    } else if (key == "seed") {
      std::uint64_t seed = 0;
      const auto t = trim(value);
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
      if (ec != std::errc{} || ptr != t.data() + t.size()) throw ConfigError("seed: expected a non-negative integer");
      config.seed = seed;
    } else if (key == "report") {
      config.report_path = std::string(trim(value));
    } else if (key == "format") {
      const auto f = trim(value);
      if (f == "json") {
        config.format = ReportFormat::json;
      } else if (f == "csv") {
        config.format = ReportFormat::csv;
      } else {
        throw ConfigError("format: expected json or csv, got '" + std::string(f) + "'");
      }
    } else if (key == "rel_tol") {
      config.rel_tol = positive(value, key);
    } else if (key == "abs_tol") {
      config.abs_tol = positive(value, key);
    } else if (key == "h_max") {
      config.h_max = positive(value, key);
    } else if (key == "interval") {
      config.interval = parse_interval(value, key);
    } else if (key == "threads") {
      config.threads = integer(value, key);
      if (config.threads < 0) throw ConfigError("threads must be non-negative");
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
    return;
  }

  if (parts[0] == "override" && parts.size() == 3) {
    EntryOverride& o = config.overrides[std::string(parts[1])];
    const auto field = parts[2];
    if (field == "interval") {
      o.interval = parse_interval(value, key);
    } else if (field == "q0") {
      o.q0 = to_vec(parse_numbers(value, key));
    } else if (field == "qdot0") {
      o.qdot0 = to_vec(parse_numbers(value, key));
    } else if (field == "tolerance") {
      o.tolerance = positive(value, key);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
    return;
  }

  if (parts[0] == "custom" && (parts.size() == 3 || (parts.size() == 4 && parts[2] == "param"))) {
    CustomSystemSpec& spec = custom_named(config, std::string(parts[1]));
    const auto field = parts[2];
    if (parts.size() == 4) {
      spec.params[std::string(parts[3])] = parse_number(value, key);
    } else if (field == "potential") {
      spec.potential = std::string(trim(value));
    } else if (field == "dim") {
      spec.dim = integer(value, key);
    } else if (field == "q0") {
      spec.q0 = to_vec(parse_numbers(value, key));
    } else if (field == "qdot0") {
      spec.qdot0 = to_vec(parse_numbers(value, key));
    } else if (field == "interval") {
      spec.interval = parse_interval(value, key);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
    return;
  }
  throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

double parse_number(std::string_view text, const std::string& what) {
  const auto t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": expected a number, got '" + std::string(t) + "'");
  }
  return v;
}

std::vector<double> parse_numbers(std::string_view text, const std::string& what) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_number(part, what));
  return out;
}

Interval parse_interval(std::string_view text, const std::string& what) {
  const auto xs = parse_numbers(text, what);
  if (xs.size() != 2) throw ConfigError(what + ": expected 'a, b'");
  if (!(xs[1] > xs[0])) throw ConfigError(what + ": interval needs b > a");
  return {xs[0], xs[1]};
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto part : split(text, ',')) {
    const auto item = trim(part);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string> seen;
  int number = 0;
  for (auto raw : split(text, '\n')) {
    ++number;
    auto line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(number) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      apply(config, key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  for (auto& spec : config.custom) {
    if (spec.potential.empty()) throw ConfigError("custom." + spec.name + ": potential is required");
    if (spec.dim == 0) spec.dim = static_cast<int>(spec.q0.size());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace noether
