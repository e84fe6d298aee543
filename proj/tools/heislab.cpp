#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "heis/experiments.hpp"

using namespace heis;

namespace {

struct Overrides {
  std::string config;
  std::optional<int> n, N;
  std::optional<std::string> convention, out;
  std::optional<unsigned long long> seed;
  std::optional<double> tol_scale;
  std::vector<std::string> suites;
  std::string corrupt;
  std::string csv_dir;
  bool dump_config = false;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON or key = value config file");
  app->add_option("--n", o.n, "number of complex dimensions");
  app->add_option("--trunc", o.N, "Hermite truncation level N");
  app->add_option("--convention", o.convention, "frame convention: section5 (c = -1) or section2 (c = -2)");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--tol-scale", o.tol_scale, "multiplier applied to every tolerance");
  app->add_option("--out", o.out, "write the JSON report here instead of stdout");
  app->add_option("--csv-dir", o.csv_dir, "also write every table as CSV into this directory");
  app->add_option("--debug-corrupt", o.corrupt, "fault injection: laplacian_weight")->group("");
  app->add_flag("--dump-config", o.dump_config, "print the resolved config and exit");
}

ExperimentConfig resolve(const Overrides& o, const std::string& command) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.n) cfg.n = *o.n;
  if (o.N) cfg.N = *o.N;
  if (o.convention) cfg.convention = *o.convention;
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol_scale) cfg.tol_scale = *o.tol_scale;
  if (o.out) cfg.out = *o.out;
  if (!o.corrupt.empty()) cfg.corrupt = o.corrupt;
  if (command == "report") {
    if (!o.suites.empty()) cfg.suites = o.suites;
  } else {
    cfg.suites = {command};
  }
  validate(cfg);
  return cfg;
}

int emit(const Report& r, const std::string& csv_dir) {
  const std::string text = to_json(r).dump(2) + "\n";
  if (r.config.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(r.config.out);
    if (!f) throw ConfigError("out", "cannot write '" + r.config.out + "'");
    f << text;
  }
  if (!csv_dir.empty()) {
    std::filesystem::create_directories(csv_dir);
    for (const auto& s : r.suites)
      for (const auto& t : s.tables) std::ofstream(std::filesystem::path(csv_dir) / (s.name + "_" + t.name + ".csv")) << to_csv(t);
  }
  for (const auto& s : r.suites) std::cerr << s.name << ": " << (s.passed() ? "pass" : "FAIL") << "\n";
  for (const auto& f : r.failures()) std::cerr << "  failed " << f << "\n";
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heislab: Heisenberg-calculus symbol experiments"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::string> commands = {"thresholds", "identities", "residues", "sandbox", "rumin", "report"};
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c, c == "report" ? "run the configured suites" : "run the " + c + " suite");
    add_common(sub, o);
    if (c == "report") sub->add_option("--suite", o.suites, "suite to run (repeatable)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const ExperimentConfig cfg = resolve(o, command);
    if (o.dump_config) {
      std::cout << to_json(cfg).dump(2) << "\n";
      return 0;
    }
    return emit(run_report(cfg), o.csv_dir);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  }
}
