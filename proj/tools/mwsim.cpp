// mwsim: scenario runner and fitter.
//
//   mwsim run <scenario> [--config file] [--set key=value]... [--out path] [--seed u64] [--threads N]
//   mwsim fit <quadratic|abs-sinusoid> --in csv [--x column] [--y column]
//   mwsim list-scenarios
//
// Exit codes: 0 ok, 2 usage, 3 invalid parameter, 4 I/O.

#include "mwion/config.hpp"
#include "mwion/csv.hpp"
#include "mwion/fit.hpp"
#include "mwion/scenarios.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace mwion;

std::string scenario_list() {
  std::string s;
  for (const auto id : all_scenarios()) {
    if (!s.empty()) s += ", ";
    s += to_string(id);
  }
  return s;
}

int run(const std::string& name, const std::string& config_path,
        const std::vector<std::string>& sets, const std::string& out,
        std::optional<std::uint64_t> seed, unsigned threads) {
  const auto id = parse_scenario(name);
  if (!id) throw UsageError("unknown scenario '" + name + "'; valid: " + scenario_list());
  ScenarioConfig cfg(*id);
  if (!config_path.empty()) cfg.merge(load_config_file(config_path));
  for (const auto& s : sets) cfg.set(s);
  if (seed) cfg.set_seed(*seed);
  const std::string csv = to_csv(run_scenario(cfg, RunOptions{threads}));
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    write_text(out, csv);
  }
  return 0;
}

int fit(const std::string& model, const std::string& in, std::string x, std::string y) {
  if (model != "quadratic" && model != "abs-sinusoid") {
    throw UsageError("unknown fit model '" + model + "'; valid: quadratic, abs-sinusoid");
  }
  Table t;
  try {
    t = read_csv(in);
  } catch (const std::invalid_argument& e) {
    throw IoError(in + ": " + e.what());
  }
  if (x.empty()) x = model == "quadratic" ? "z_um" : "phi_r_rad";
  if (y.empty()) y = model == "quadratic" ? "rabi_mhz" : "rabi_clock_mhz";
  std::vector<double> xs, ys;
  try {
    xs = t.column(x);
    ys = t.column(y);
  } catch (const std::out_of_range& e) {
    throw UsageError(in + ": " + e.what());
  }
  FitResult r;
  try {
    r = model == "quadratic" ? fit_quadratic(xs, ys) : fit_abs_sinusoid(xs, ys);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(in, e.what());
  }
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["x"] = x;
  j["y"] = y;
  j["residual_norm"] = r.residual_norm;
  for (const auto& p : r.parameters) {
    j["parameters"][p.name] = {{"value", p.value}, {"unit", p.unit}, {"variance", p.variance}};
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microwave-driven trapped-ion gate simulator"};
  app.require_subcommand(1);

  std::string scenario, config_path, out;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  auto* run_cmd = app.add_subcommand("run", "Compute a scenario dataset as CSV");
  run_cmd->add_option("scenario", scenario, "Scenario id")->required();
  run_cmd->add_option("--config", config_path, "JSON config file or a previous output CSV");
  run_cmd->add_option("--set", sets, "Override, e.g. field.z0_um=900")->allow_extra_args(false);
  run_cmd->add_option("--out", out, "Output path (default stdout)");
  run_cmd->add_option("--seed", seed, "Shot-noise seed");
  run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

  std::string model, in, x, y;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to two CSV columns, print JSON");
  fit_cmd->add_option("model", model, "quadratic | abs-sinusoid")->required();
  fit_cmd->add_option("--in", in, "Input CSV")->required();
  fit_cmd->add_option("--x", x, "Abscissa column");
  fit_cmd->add_option("--y", y, "Ordinate column");

  auto* list_cmd = app.add_subcommand("list-scenarios", "Print the scenario ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return run(scenario, config_path, sets, out, seed, threads);
    if (*fit_cmd) return fit(model, in, x, y);
    if (*list_cmd) {
      for (const auto id : all_scenarios()) std::cout << to_string(id) << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "invalid parameter " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
