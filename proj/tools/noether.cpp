#include "noether/catalog.hpp"
#include "noether/config.hpp"
#include "noether/errors.hpp"
#include "noether/report.hpp"
#include "noether/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace noether;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

int cmd_list(bool json, const std::string& filter) {
  std::vector<EntrySummary> rows;
  for (auto& s : list_entries()) {
    if (filter.empty() || s.id.find(filter) != std::string::npos) rows.push_back(std::move(s));
  }
  if (json) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& s : rows) {
      out.push_back({{"id", s.id},
                     {"title", s.title},
                     {"dim", s.dim},
                     {"triples", s.triples},
                     {"expected", s.expected},
                     {"tags", s.tags}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << std::left << std::setw(28) << "id" << std::setw(5) << "dim" << std::setw(9) << "triples"
            << "expected\n";
  for (const auto& s : rows) {
    std::cout << std::left << std::setw(28) << s.id << std::setw(5) << s.dim << std::setw(9) << s.triples
              << s.expected << "\n";
  }
  return 0;
}

int cmd_explain(const std::string& id) {
  const CatalogEntry e = get_entry(id);
  std::cout << e.id << ": " << e.title << "\n" << e.summary << "\n";
  std::cout << "tags:";
  for (const auto& t : e.tags) std::cout << " [" << t << "]";
  std::cout << "\ndimension: " << e.dim() << "\n";
  std::cout << "\ntriples:\n";
  for (const auto& t : e.triples) {
    std::cout << "  " << t.id << " [" << t.tag << "] (" << to_string(t.applicability) << ", "
              << (t.triple.style() == Style::tau ? "tau" : "theta") << " style)\n    " << t.description << "\n";
  }
  std::cout << "\nexpected constants:\n";
  for (const auto& c : e.expected) {
    std::cout << "  " << c.id << " (tolerance " << format_number(c.tolerance) << ", " << to_string(c.applicability)
              << ")\n    " << c.description << "\n";
  }
  if (!e.total_derivatives.empty()) {
    std::cout << "\ntotal-derivative claims:\n";
    for (const auto& c : e.total_derivatives) {
      std::cout << "  " << c.id << " (" << to_string(c.applicability) << ")\n    " << c.description << "\n";
    }
  }
  if (!e.checks.empty()) {
    std::cout << "\nchecks:\n";
    for (const auto& c : e.checks) std::cout << "  " << c.id << "\n    " << c.description << "\n";
  }
  if (!e.notes.empty()) {
    std::cout << "\nnotes:\n";
    for (const auto& n : e.notes) std::cout << "  - " << n << "\n";
  }
  return 0;
}

void print_summary(const ReportDocument& doc, std::ostream& out) {
  for (const auto& e : doc.entries) {
    int passed = 0;
    for (const auto& r : e.records) passed += r.pass ? 1 : 0;
    out << (e.pass ? "PASS " : "FAIL ") << std::left << std::setw(28) << e.id << passed << "/" << e.records.size()
        << "\n";
    for (const auto& r : e.records) {
      if (r.pass) continue;
      out << "     failed " << r.qualified_id() << ": " << format_number(r.rel) << " vs " << format_number(r.tolerance);
      if (!r.detail.empty()) out << " (" << r.detail << ")";
      out << "\n";
    }
  }
  out << (doc.pass ? "overall: PASS" : "overall: FAIL") << "\n";
}

struct VerifyFlags {
  std::string config_path;
  std::string entries;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string format;
  std::optional<double> rel_tol;
  std::string interval;
  std::optional<int> threads;
};

int cmd_verify(const VerifyFlags& flags) {
  RunConfig config;
  try {
    if (!flags.config_path.empty()) config = load_config(flags.config_path);
    if (!flags.entries.empty()) config.entries = split_list(flags.entries);
    if (flags.seed) config.seed = *flags.seed;
    if (!flags.report.empty()) config.report_path = flags.report;
    if (flags.format == "json") config.format = ReportFormat::json;
    if (flags.format == "csv") config.format = ReportFormat::csv;
    if (flags.rel_tol) {
      if (!(*flags.rel_tol > 0.0)) throw ConfigError("--rel-tol must be positive");
      config.rel_tol = *flags.rel_tol;
    }
    if (!flags.interval.empty()) config.interval = parse_interval(flags.interval, "--interval");
    if (flags.threads) config.threads = *flags.threads;
    resolve_entries(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const ReportDocument doc = run_verification(config);
  const std::string rendered = render_report(doc, config.format);
  if (config.report_path && *config.report_path == "-") {
    std::cout << rendered;
    print_summary(doc, std::cerr);
  } else {
    if (config.report_path) write_atomically(*config.report_path, rendered);
    print_summary(doc, std::cout);
  }
  return doc.pass ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noether constants of motion: catalog, verification and reports"};
  app.set_version_flag("--version", noether::tool_version());
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List catalog entries");
  bool list_json = false;
  std::string filter;
  list->add_flag("--json", list_json, "Print entry summaries as JSON");
  list->add_option("--filter", filter, "Only ids containing this text");

  auto* verify = app.add_subcommand("verify", "Verify catalog entries and write a report");
  VerifyFlags flags;
  verify->add_option("--config", flags.config_path, "Key-value run configuration file");
  verify->add_option("--entries", flags.entries, "Comma-separated entry ids, or all");
  verify->add_option("--seed", flags.seed, "Seed for randomized checks");
  verify->add_option("--report", flags.report, "Report path; - writes the report to standard output");
  verify->add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--rel-tol", flags.rel_tol, "Integrator relative tolerance");
  verify->add_option("--interval", flags.interval, "Interval a,b applied to every selected entry");
  verify->add_option("--threads", flags.threads, "Worker count; 0 uses every core");

  auto* explain = app.add_subcommand("explain", "Describe one catalog entry");
  std::string explain_id;
  explain->add_option("id", explain_id, "Entry id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*list) return cmd_list(list_json, filter);
    if (*verify) return cmd_verify(flags);
    if (*explain) return cmd_explain(explain_id);
  } catch (const noether::UnknownEntry& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const noether::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
