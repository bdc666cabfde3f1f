#pragma once

#include <set>
#include <string>

#include "hermlab/report.hpp"

namespace hermlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_keys(const Json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
T get_or(const Json& j, const std::string& key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

inline void check_positive(double v, const std::string& name) {
  if (!(v > 0)) throw ConfigError("tolerance '" + name + "' must be > 0");
}

/// Schema-validated experiment configuration. One nested JSON document; the
/// allowed keys depend on `kind`.
struct ExperimentConfig {
  std::string kind;  // geometry-verify | df-sweep | bkmkh | bergman | twisted | detraz
  std::string metric = "hopf";
  std::string weight = "zero";
  std::string domain = "disc";  // disc | square | product
  int n = 2;
  int degree = 25;
  int resolution = 256;
  int cauchy_resolution = 128;
  std::vector<int> resolutions = {16, 32, 48};
  std::vector<double> etas;
  std::vector<double> s_list;
  double s = 0.25;
  double tol = 1e-2;
  double psd_tol = 1e-8;
  double slack = 0.10;
  std::uint64_t seed = 20240611;
  int samples = 50;
  std::string out_dir = ".";
  std::string format = "json";
  Json raw;

  static ExperimentConfig parse(const Json& j) {
    static const std::set<std::string> allowed = {
        "kind",   "metric",      "weight",     "domain",     "n",
        "degree", "resolution",  "resolutions", "etas",      "s_list",
        "s",      "tol",         "psd_tol",    "slack",      "seed",
        "samples", "out_dir",    "format",     "cauchy_resolution"};
    require_keys(j, allowed, "config");
    ExperimentConfig c;
    c.raw = j;
    if (!j.contains("kind")) throw ConfigError("config: missing 'kind'");
    c.kind = j.at("kind").get<std::string>();
    static const std::set<std::string> kinds = {"geometry-verify", "df-sweep",
                                                "bkmkh",           "bergman",
                                                "twisted",         "detraz"};
    if (!kinds.count(c.kind)) throw ConfigError("config: unknown kind '" + c.kind + "'");
    c.metric = get_or<std::string>(j, "metric", c.metric);
    c.weight = get_or<std::string>(j, "weight", c.weight);
    c.domain = get_or<std::string>(j, "domain", c.domain);
    c.n = get_or<int>(j, "n", c.n);
    c.degree = get_or<int>(j, "degree", c.degree);
    c.resolution = get_or<int>(j, "resolution", c.resolution);
    c.cauchy_resolution = get_or<int>(j, "cauchy_resolution", c.cauchy_resolution);
    c.resolutions = get_or<std::vector<int>>(j, "resolutions", c.resolutions);
    c.etas = get_or<std::vector<double>>(j, "etas", c.etas);
    c.s_list = get_or<std::vector<double>>(j, "s_list", c.s_list);
    c.s = get_or<double>(j, "s", c.s);
    c.tol = get_or<double>(j, "tol", c.tol);
    c.psd_tol = get_or<double>(j, "psd_tol", c.psd_tol);
    c.slack = get_or<double>(j, "slack", c.slack);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.samples = get_or<int>(j, "samples", c.samples);
    c.out_dir = get_or<std::string>(j, "out_dir", c.out_dir);
    c.format = get_or<std::string>(j, "format", c.format);
    check_positive(c.tol, "tol");
    check_positive(c.psd_tol, "psd_tol");
    if (c.slack < 0) throw ConfigError("slack must be >= 0");
    if (c.n < 1) throw ConfigError("n must be >= 1");
    static const std::set<std::string> metrics = {"euclidean", "hopf", "fubini-study",
                                                  "product", "conformal"};
    if (!metrics.count(c.metric))
      throw ConfigError("unknown registry entry: metric '" + c.metric + "'");
    static const std::set<std::string> weights = {"zero", "abs2", "re2z1"};
    if (!weights.count(c.weight))
      throw ConfigError("unknown registry entry: weight '" + c.weight + "'");
    static const std::set<std::string> domains = {"disc", "square", "product"};
    if (!domains.count(c.domain))
      throw ConfigError("unknown registry entry: domain '" + c.domain + "'");
    static const std::set<std::string> formats = {"json", "csv", "both"};
    if (!formats.count(c.format)) throw ConfigError("format must be json|csv|both");
    if (c.etas.empty())
      for (int i = 0; i <= 20; ++i) c.etas.push_back(0.05 * i);
    if (c.s_list.empty()) c.s_list = {0.1, 0.2, 0.3, 0.4};
    return c;
  }

  static ExperimentConfig from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file: " + path);
    Json j;
    try {
      f >> j;
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse(j);
  }
};

}  // namespace hermlab
