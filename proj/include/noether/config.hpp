#pragma once

#include "noether/verify.hpp"

#include <string>
#include <string_view>

namespace noether {

/// Parses the key-value run configuration. One `key = value` per line; `#`
/// starts a comment. Keys:
///
///   entries = all | id, id, ...
///   seed = 7
///   report = path
///   format = json | csv
///   rel_tol, abs_tol, h_max = positive number
///   interval = a, b
///   threads = count (0 = hardware)
///   override.<entry>.interval | q0 | qdot0 = comma-separated numbers
///   override.<entry>.tolerance = positive number
///   custom.<name>.potential = harmonic | kepler | inverse_square | toda | calogero | free
///   custom.<name>.dim = n
///   custom.<name>.q0 | qdot0 | interval = comma-separated numbers
///   custom.<name>.param.<key> = number
///
/// ConfigError names the offending line for unknown keys, duplicates and bad values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Strict number parsing shared with the command line; ConfigError on failure.
double parse_number(std::string_view text, const std::string& what);
std::vector<double> parse_numbers(std::string_view text, const std::string& what);
Interval parse_interval(std::string_view text, const std::string& what);
std::vector<std::string> split_list(std::string_view text);

}  // namespace noether
