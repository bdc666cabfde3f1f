#pragma once

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "hermlab/core.hpp"

namespace hermlab {

using Json = nlohmann::json;

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Fixed-format float printing so reports are byte-stable across runs.
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CheckRecord {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool gating = true;
  std::string provenance;  // "paper-constant: ..." or "measured-baseline"
};

struct RunReport {
  Json config_echo;
  std::vector<CheckRecord> checks;
  std::vector<std::vector<std::string>> csv_rows;  // first row = header
  double wall_seconds = 0.0;

  bool all_gating_pass() const {
    for (const auto& c : checks)
      if (c.gating && !c.pass) return false;
    return true;
  }

  void add(std::string name, double value, double bound, double tol, bool pass,
           std::string provenance, bool gating = true) {
    checks.push_back({std::move(name), value, bound, tol, pass, gating,
                      std::move(provenance)});
  }

  Json to_json() const {
    Json j;
    j["toolkit_version"] = kToolkitVersion;
    j["config"] = config_echo;
    j["wall_seconds"] = wall_seconds;
    j["all_gating_pass"] = all_gating_pass();
    Json arr = Json::array();
    for (const auto& c : checks) {
      Json r;
      r["name"] = c.name;
      r["value"] = c.value;
      r["bound"] = c.bound;
      r["tol"] = c.tol;
      r["pass"] = c.pass;
      r["gating"] = c.gating;
      r["provenance"] = c.provenance;
      arr.push_back(r);
    }
    j["checks"] = arr;
    if (!csv_rows.empty()) {
      Json rows = Json::array();
      for (const auto& row : csv_rows) rows.push_back(row);
      j["rows"] = rows;
    }
    return j;
  }

  /// Flattened per-check CSV plus any experiment rows; excludes wall time so
  /// repeated runs with identical config/seed are byte-identical.
  std::string to_csv() const {
    std::string out = "check_name,value,bound,tol,pass,gating,provenance\n";
    for (const auto& c : checks) {
      out += c.name + "," + fmt_num(c.value) + "," + fmt_num(c.bound) + "," +
             fmt_num(c.tol) + "," + (c.pass ? "1" : "0") + "," +
             (c.gating ? "1" : "0") + "," + c.provenance + "\n";
    }
    if (!csv_rows.empty()) {
      out += "\n";
      for (const auto& row : csv_rows) {
        for (size_t i = 0; i < row.size(); ++i) {
          out += row[i];
          out += (i + 1 < row.size()) ? "," : "\n";
        }
      }
    }
    return out;
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

inline void emit_report(const RunReport& r, const std::string& out_dir,
                        const std::string& stem, const std::string& format) {
  if (format == "json" || format == "both")
    write_file(out_dir + "/" + stem + ".json", r.to_json().dump(2) + "\n");
  if (format == "csv" || format == "both")
    write_file(out_dir + "/" + stem + ".csv", r.to_csv());
}

}  // namespace hermlab
