#include "noether/report.hpp"

#include "noether/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace noether {

namespace {

using Json = nlohmann::ordered_json;

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

Json numbers(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Json interval(const Interval& iv) { return Json::array({number(iv.a), number(iv.b)}); }

Json config_json(const RunConfig& c) {
  Json j;
  j["entries"] = c.entries;
  j["seed"] = c.seed;
  j["format"] = c.format == ReportFormat::json ? "json" : "csv";
  j["report"] = c.report_path ? Json(*c.report_path) : Json(nullptr);
  j["interval"] = c.interval ? interval(*c.interval) : Json(nullptr);
  j["rel_tol"] = c.rel_tol ? number(*c.rel_tol) : Json(nullptr);
  j["abs_tol"] = c.abs_tol ? number(*c.abs_tol) : Json(nullptr);
  j["h_max"] = c.h_max ? number(*c.h_max) : Json(nullptr);
  Json overrides = Json::object();
  for (const auto& [id, o] : c.overrides) {
    Json e = Json::object();
    if (o.interval) e["interval"] = interval(*o.interval);
    if (o.q0) e["q0"] = numbers(*o.q0);
    if (o.qdot0) e["qdot0"] = numbers(*o.qdot0);
    if (o.tolerance) e["tolerance"] = number(*o.tolerance);
    overrides[id] = e;
  }
  j["overrides"] = overrides;
  Json custom = Json::array();
  for (const auto& s : c.custom) {
    Json params = Json::object();
    for (const auto& [k, v] : s.params) params[k] = number(v);
    custom.push_back({{"name", s.name},
                      {"potential", s.potential},
                      {"dim", s.dim},
                      {"q0", numbers(s.q0)},
                      {"qdot0", numbers(s.qdot0)},
                      {"interval", interval(s.interval)},
                      {"params", params}});
  }
  j["custom"] = custom;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string report_json(const ReportDocument& doc) {
  Json j;
  j["schema"] = doc.schema;
  j["tool_version"] = doc.tool_version;
  j["config"] = config_json(doc.config);
  j["pass"] = doc.pass;
  j["seconds"] = doc.seconds;
  Json entries = Json::array();
  for (const EntryReport& e : doc.entries) {
    Json records = Json::array();
    for (const VerificationRecord& r : e.records) {
      records.push_back({{"kind", r.kind},
                         {"constant_id", r.qualified_id()},
                         {"t0", number(r.t0)},
                         {"max_abs_drift", number(r.max_abs)},
                         {"rel_drift", number(r.rel)},
                         {"tolerance", number(r.tolerance)},
                         {"pass", r.pass},
                         {"detail", r.detail}});
    }
    entries.push_back(
        {{"id", e.id}, {"title", e.title}, {"pass", e.pass}, {"seconds", e.seconds}, {"records", records}});
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

std::string report_csv(const ReportDocument& doc) {
  std::ostringstream out;
  out << "entry_id,constant_id,t0,max_abs_drift,rel_drift,tolerance,pass\n";
  for (const EntryReport& e : doc.entries) {
    for (const VerificationRecord& r : e.records) {
      out << csv_field(e.id) << ',' << csv_field(r.qualified_id()) << ',' << format_number(r.t0) << ','
          << format_number(r.max_abs) << ',' << format_number(r.rel) << ',' << format_number(r.tolerance) << ','
          << (r.pass ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

std::string render_report(const ReportDocument& doc, ReportFormat format) {
  return format == ReportFormat::json ? report_json(doc) : report_csv(doc);
}

void write_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + temp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw Error("failed writing '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp);
    throw Error("cannot move report into place at '" + path + "': " + ec.message());
  }
}

}  // namespace noether
