#pragma once

#include "noether/verify.hpp"

#include <string>

namespace noether {

/// Shortest decimal that reads back to the same binary64; nan, inf and -inf
/// for non-finite values.
std::string format_number(double x);

/// Versioned JSON report (`"schema": 1`).
std::string report_json(const ReportDocument& doc);
/// One row per record: entry_id, constant_id, t0, max_abs_drift, rel_drift, tolerance, pass.
std::string report_csv(const ReportDocument& doc);
std::string render_report(const ReportDocument& doc, ReportFormat format);

/// Writes to a temporary file beside `path`, then renames it into place.
void write_atomically(const std::string& path, const std::string& contents);

}  // namespace noether
