#pragma once

#include "noether/catalog.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace noether {

/// Per-entry replacements for the default initial value problem and drift tolerance.
struct EntryOverride {
  std::optional<Interval> interval;
  std::optional<Vec> q0;
  std::optional<Vec> qdot0;
  std::optional<double> tolerance;
};

enum class ReportFormat { json, csv };

struct RunConfig {
  std::vector<std::string> entries{"all"};
  std::map<std::string, EntryOverride> overrides;
  std::optional<Interval> interval;  ///< applied to every selected entry
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<double> h_max;
  std::optional<std::string> report_path;
  ReportFormat format = ReportFormat::json;
  std::uint64_t seed = 0;
  int threads = 0;  ///< 0 selects the hardware concurrency
  std::vector<CustomSystemSpec> custom;
};

/// One verified claim. `kind` is drift, residual, residual_off_shell,
/// trivialize_bh, trivialize_time, style, total_derivative, check or error.
struct VerificationRecord {
  std::string kind;
  std::string id;
  double t0 = 0.0;
  double max_abs = 0.0;
  double rel = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;

  /// kind-qualified id used as the CSV constant_id ("drift" records keep the bare id).
  std::string qualified_id() const { return kind == "drift" ? id : kind + ":" + id; }
};

struct EntryReport {
  std::string id;
  std::string title;
  std::vector<VerificationRecord> records;
  bool pass = false;
  double seconds = 0.0;
};

struct ReportDocument {
  int schema = 1;
  std::string tool_version;
  RunConfig config;
  std::vector<EntryReport> entries;
  bool pass = false;
  double seconds = 0.0;
};

std::string tool_version();

/// Selected entries in catalog order followed by custom systems; ConfigError
/// for unknown ids, unknown override targets or bad custom specs.
std::vector<CatalogEntry> resolve_entries(const RunConfig& config);

/// Applies overrides and integrator settings to the entry's initial value problem.
InitialValueProblem effective_ivp(const CatalogEntry& entry, const RunConfig& config);

/// Runs every claim of one entry; never throws, errors become failing records.
EntryReport verify_entry(const CatalogEntry& entry, const RunConfig& config);

/// Verifies entries in parallel and assembles the report in selection order.
ReportDocument run_verification(const RunConfig& config);

}  // namespace noether
