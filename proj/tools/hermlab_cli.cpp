// Command-line front end: each subcommand is a thin wrapper over run_config
// with flag overrides; see configs/ for sample documents.

#include <CLI11.hpp>

#include "hermlab/runner.hpp"

using hermlab::Json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::int64_t seed = -1;
  double slack = -1.0;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "JSON config file");
  sub->add_option("--out", f.out_dir, "output directory");
  sub->add_option("--format", f.format, "json|csv|both");
  sub->add_option("--seed", f.seed, "RNG seed override");
  sub->add_option("--slack", f.slack, "fractional slack on paper constants");
}

int execute(const Json& defaults, const CommonFlags& f, const std::string& stem) {
  Json cfg = defaults;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) {
      std::fprintf(stderr, "{\"error\":\"schema\",\"message\":\"cannot read %s\"}\n",
                   f.config_path.c_str());
      return 2;
    }
    try {
      in >> cfg;
    } catch (const Json::exception& e) {
      std::fprintf(stderr, "{\"error\":\"schema\",\"message\":\"%s\"}\n", e.what());
      return 2;
    }
    if (defaults.contains("kind") && cfg.contains("kind") &&
        cfg["kind"] != defaults["kind"]) {
      std::fprintf(stderr,
                   "{\"error\":\"schema\",\"message\":\"config kind does not match "
                   "subcommand\"}\n");
      return 2;
    }
  }
  if (!f.out_dir.empty()) cfg["out_dir"] = f.out_dir;
  if (!f.format.empty()) cfg["format"] = f.format;
  if (f.seed >= 0) cfg["seed"] = static_cast<std::uint64_t>(f.seed);
  if (f.slack >= 0) cfg["slack"] = f.slack;
  return hermlab::run_and_emit(cfg, stem);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hermlab: numerical checks for Hermitian geometry and Bergman "
               "projection estimates"};
  app.require_subcommand(1);

  CommonFlags flags;
  Json defaults;
  std::string stem;

  auto* check_df = app.add_subcommand("check-df", "eta sweep of the curvature "
                                                  "inequality on a sampled domain");
  std::string df_domain = "product";
  int df_n = 2;
  check_df->add_option("--domain", df_domain, "product|disc");
  check_df->add_option("--n", df_n, "complex dimension");
  CommonFlags df_flags;
  add_common(check_df, df_flags);
  check_df->callback([&]() {
    defaults = {{"kind", "df-sweep"}, {"domain", df_domain}, {"n", df_n}};
    flags = df_flags;
    stem = "df_sweep";
  });

  auto* hopf = app.add_subcommand("hopf-verify",
                                  "closed-form Hopf curvature/torsion checks");
  int hopf_n = 2;
  hopf->add_option("--n", hopf_n, "complex dimension");
  CommonFlags hopf_flags;
  add_common(hopf, hopf_flags);
  hopf->callback([&]() {
    defaults = {{"kind", "geometry-verify"}, {"metric", "hopf"}, {"n", hopf_n}};
    flags = hopf_flags;
    stem = "hopf_verify";
  });

  auto* bkmkh = app.add_subcommand("bkmkh-check",
                                   "twisted Bochner-Kodaira identity by quadrature");
  std::string bk_metric = "euclidean";
  bkmkh->add_option("--metric", bk_metric, "euclidean|hopf");
  CommonFlags bk_flags;
  add_common(bkmkh, bk_flags);
  bkmkh->callback([&]() {
    defaults = {{"kind", "bkmkh"}, {"metric", bk_metric}};
    flags = bk_flags;
    stem = "bkmkh";
  });

  auto* bergman = app.add_subcommand("bergman-run",
                                     "weighted Bergman projection bound experiment");
  std::string bg_domain = "disc";
  bergman->add_option("--domain", bg_domain, "disc|square");
  CommonFlags bg_flags;
  add_common(bergman, bg_flags);
  bergman->callback([&]() {
    defaults = {{"kind", "bergman"}, {"domain", bg_domain}};
    flags = bg_flags;
    stem = "bergman";
  });

  auto* twisted = app.add_subcommand("solve-twisted",
                                     "twisted dbar solution operator diagnostics");
  std::string tw_domain = "disc";
  twisted->add_option("--domain", tw_domain, "disc|square");
  CommonFlags tw_flags;
  add_common(twisted, tw_flags);
  twisted->callback([&]() {
    defaults = {{"kind", "twisted"}, {"domain", tw_domain}};
    flags = tw_flags;
    stem = "twisted";
  });

  auto* detraz = app.add_subcommand("detraz", "Detraz-type ratio sweep");
  std::string dz_domain = "square";
  detraz->add_option("--domain", dz_domain, "disc|square");
  CommonFlags dz_flags;
  add_common(detraz, dz_flags);
  detraz->callback([&]() {
    defaults = {{"kind", "detraz"}, {"domain", dz_domain}};
    flags = dz_flags;
    stem = "detraz";
  });

  CLI11_PARSE(app, argc, argv);
  return execute(defaults, flags, stem);
}
