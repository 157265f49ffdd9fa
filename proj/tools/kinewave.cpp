#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kinewave/compare.hpp"
#include "kinewave/engine.hpp"
#include "kinewave/errors.hpp"
#include "kinewave/output.hpp"
#include "kinewave/scenario.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct RunOptions {
  std::string scenario;
  std::string out;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> emit;
  std::string oracle;
};

int run(const RunOptions& opt) {
  auto sc = kinewave::parse_scenario_file(opt.scenario);
  if (opt.dt) sc.sim.dt = *opt.dt;
  if (opt.horizon) sc.sim.horizon = *opt.horizon;
  sc.sim.validate(sc.network);
  if (opt.seed) {
    sc.reseed(*opt.seed);
  } else {
    sc.regenerate_demand();
  }
  for (const auto& e : opt.emit) {
    if (e == "moskowitz") sc.outputs.moskowitz = true;
  }

  const auto out = kinewave::run(sc.network, sc.demand, sc.sim);
  kinewave::emit_outputs(sc, out, opt.out);
  std::fprintf(stderr, "kinewave: %zu steps, %zu links, %.3f s, balance %.3g veh\n",
               out.times.size() - 1, out.links.size(), out.wall_seconds,
               kinewave::vehicle_balance(sc.network, out));

  if (!opt.oracle.empty()) {
    const auto report = opt.oracle == "ctm"
                            ? kinewave::compare_with_ctm(sc.network, sc.demand, out)
                            : kinewave::compare_with_front_tracking(sc.network, out);
    const auto path = std::filesystem::path(opt.out) / ("oracle_" + opt.oracle + ".json");
    std::ofstream f(path);
    if (!f) throw kinewave::SimulationError("cannot write '" + path.string() + "'");
    f << report.dump(2) << '\n';
    std::cout << report.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematic-wave network loading on link cumulative curves"};
  app.require_subcommand(1);
  RunOptions opt;
  auto* cmd = app.add_subcommand("run", "Simulate a scenario and write CSV outputs");
  cmd->add_option("--scenario", opt.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out, "Output directory")->required();
  cmd->add_option("--dt", opt.dt, "Time step [h]");
  cmd->add_option("--horizon", opt.horizon, "Horizon [h]");
  cmd->add_option("--seed", opt.seed, "Seed for every uniform demand");
  cmd->add_option("--emit", opt.emit, "Extra outputs")->check(CLI::IsMember({"moskowitz"}));
  cmd->add_option("--oracle", opt.oracle, "Cross-check against an oracle")
      ->check(CLI::IsMember({"ctm", "fronttrack"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    return run(opt);
  } catch (const kinewave::ValidationError& e) {
    std::cerr << "kinewave: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "kinewave: aborted: " << e.what() << '\n';
    return kExitRuntime;
  }
}
