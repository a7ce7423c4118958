#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <iostream>

#include "exitwell/config.hpp"
#include "exitwell/errors.hpp"
#include "exitwell/report.hpp"

namespace {

struct CliState {
  std::string config_path;
  std::string out_json, csv_prefix;
  std::vector<double> eps_override;
  int order_override = -1;
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CliState& st) {
  cmd->add_option("-c,--config", st.config_path, "problem description file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", st.out_json, "write the JSON document here");
  cmd->add_option("--csv", st.csv_prefix, "prefix for CSV table dumps");
  cmd->add_option("--order", st.order_override, "override expansion order");
  cmd->add_option("--eps", st.eps_override, "override the eps list");
  cmd->add_option("--threads", st.threads, "Monte Carlo worker threads");
}

exitwell::RunConfig load(const CliState& st) {
  exitwell::RunConfig cfg = exitwell::parse_config_file(st.config_path);
  if (!st.out_json.empty()) cfg.output.json = st.out_json;
  if (!st.csv_prefix.empty()) cfg.output.csv_prefix = st.csv_prefix;
  if (st.order_override >= 0) cfg.expansion.order = st.order_override;
  if (!st.eps_override.empty()) {
    cfg.expansion.eps = st.eps_override;
    for (double e : cfg.expansion.eps)
      if (!(e > 0)) throw exitwell::ConfigError("--eps values must be positive");
    std::sort(cfg.expansion.eps.begin(), cfg.expansion.eps.end(),
              std::greater<double>());
    cfg.expansion.eps.erase(
        std::unique(cfg.expansion.eps.begin(), cfg.expansion.eps.end()),
        cfg.expansion.eps.end());
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymptotic exit-time engine for planar single-well diffusions"};
  app.require_subcommand(1);
  CliState st;

  CLI::App* c_inspect =
      app.add_subcommand("inspect", "geometry, potential and assumption checks");
  CLI::App* c_expand =
      app.add_subcommand("expand", "build the expansion and report its scalars");
  CLI::App* c_evaluate =
      app.add_subcommand("evaluate", "evaluate the expansion at probe points");
  CLI::App* c_validate =
      app.add_subcommand("validate", "cross-check against numerical solvers");
  CLI::App* c_report =
      app.add_subcommand("report", "full document: all of the above");
  for (CLI::App* c : {c_inspect, c_expand, c_evaluate, c_validate, c_report})
    add_common(c, st);
  c_validate->add_option("--seed", st.seed, "Monte Carlo base seed");
  c_report->add_option("--seed", st.seed, "Monte Carlo base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // bad usage is a configuration error
  }

  try {
    const exitwell::RunConfig cfg = load(st);
    exitwell::ReportOptions opt;
    opt.threads = st.threads;
    st.seed_set = c_validate->count("--seed") > 0 || c_report->count("--seed") > 0;
    opt.has_seed_override = st.seed_set;
    opt.seed_override = st.seed;

    exitwell::ordered_json doc;
    if (c_inspect->parsed()) doc = exitwell::inspect_report(cfg);
    else if (c_expand->parsed()) doc = exitwell::expand_report(cfg);
    else if (c_evaluate->parsed()) doc = exitwell::evaluate_report(cfg);
    else if (c_validate->parsed()) doc = exitwell::validate_report(cfg, opt);
    else doc = exitwell::full_report(cfg, opt);

    std::cout << exitwell::render_text(doc);
    exitwell::emit_output(doc, cfg.output);
    return 0;
  } catch (const exitwell::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const exitwell::AssumptionError& e) {
    std::cerr << "assumption violated: " << e.what() << "\n";
    return 2;
  } catch (const exitwell::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
