#include "kinewave/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kinewave/errors.hpp"
#include "kinewave/link_dynamics.hpp"

namespace kinewave {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw SimulationError("cannot write '" + path.string() + "'");
  return f;
}

void close(std::ofstream& f, const std::filesystem::path& path) {
  f.close();
  if (!f) throw SimulationError("error while writing '" + path.string() + "'");
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

void emit_outputs(const Scenario& scenario, const SimOutput& out,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimulationError("cannot create '" + dir.string() + "': " + ec.message());
  const auto& req = scenario.outputs;
  const std::size_t nl = out.links.size();
  const std::size_t steps = out.times.size() - 1;

  if (req.flows) {
    const auto path = dir / "flows.csv";
    auto f = open(path);
    f << "t,link,q_in,q_out\n";
    for (std::size_t n = 0; n < steps; ++n) {
      for (std::size_t i = 0; i < nl; ++i) {
        f << format_number(out.times[n]) << ',' << out.link_ids[i] << ','
          << format_number(out.links[i].q_in[n]) << ',' << format_number(out.links[i].q_out[n])
          << '\n';
      }
    }
    close(f, path);
  }

  if (req.cumulative) {
    const auto path = dir / "cumulative.csv";
    auto f = open(path);
    f << "t,link,N_up,N_down\n";
    for (std::size_t n = 0; n <= steps; ++n) {
      for (std::size_t i = 0; i < nl; ++i) {
        f << format_number(out.times[n]) << ',' << out.link_ids[i] << ','
          << format_number(out.links[i].n_up.counts()[n]) << ','
          << format_number(out.links[i].n_down.counts()[n]) << '\n';
      }
    }
    close(f, path);
  }

  if (req.spillback) {
    const auto path = dir / "spillback.csv";
    auto f = open(path);
    f << "t,link,flag\n";
    for (std::size_t n = 0; n <= steps; ++n) {
      for (std::size_t i = 0; i < nl; ++i) {
        f << format_number(out.times[n]) << ',' << out.link_ids[i] << ','
          << static_cast<int>(out.spillback[i][n]) << '\n';
      }
    }
    close(f, path);
  }

  if (req.moskowitz) {
    for (std::size_t i = 0; i < nl; ++i) {
      const auto& link = out.links[i];
      const auto xs = linspace(0.0, link.params.L, req.moskowitz_intervals);
      const auto grid = reconstruct_moskowitz(link, out.times, xs, out.config.eps_n);
      const double dx = link.params.L / static_cast<double>(req.moskowitz_intervals);
      const auto path = dir / ("moskowitz_" + out.link_ids[i] + ".csv");
      auto f = open(path);
      f << "t,x,N,is_shock\n";
      for (std::size_t ti = 0; ti < grid.times.size(); ++ti) {
        const auto nearest = static_cast<std::size_t>(std::llround(grid.shock[ti] / dx));
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
          f << format_number(grid.times[ti]) << ',' << format_number(xs[xi]) << ','
            << format_number(grid.at(ti, xi)) << ',' << (xi == nearest ? 1 : 0) << '\n';
        }
      }
      close(f, path);
    }
  }

  nlohmann::json meta;
  meta["scenario"] = scenario_to_json(scenario);
  meta["config"] = {{"dt", out.config.dt},
                    {"horizon", out.config.horizon},
                    {"eps_N", out.config.eps_n},
                    {"steps", steps},
                    {"origin_model", out.config.origin_model == OriginModel::PointQueue
                                         ? "point_queue"
                                         : "virtual_link"}};
  meta["seed"] = out.config.seed;
  meta["versions"] = {{"kinewave", kVersion},
                      {"compiler", __VERSION__},
                      {"cxx_standard", __cplusplus},
                      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  const auto path = dir / "meta.json";
  auto f = open(path);
  f << meta.dump(2) << '\n';
  close(f, path);
}

}  // namespace kinewave
