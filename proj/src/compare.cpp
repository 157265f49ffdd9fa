#include "kinewave/compare.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "kinewave/ctm.hpp"
#include "kinewave/front_tracking.hpp"

namespace kinewave {

using nlohmann::json;

namespace {

std::optional<double> first_flag(const std::vector<std::uint8_t>& flags,
                                 const std::vector<double>& times) {
  for (std::size_t n = 0; n < flags.size(); ++n) {
    if (flags[n]) return times[n];
  }
  return std::nullopt;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::size_t oracle_threads() {
  if (const char* env = std::getenv("KINEWAVE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

json compare_with_ctm(const Network& net, const DemandProfiles& demand, const SimOutput& out,
                      double dx) {
  double speed = 0.0;
  for (const auto& l : net.links()) speed = std::max({speed, l.params.k, l.params.w});
  const double dt = out.config.dt;
  const auto m = static_cast<std::size_t>(std::ceil(2.0 * dt * speed / dx - 1e-9));
  const double dt_ctm = dt / static_cast<double>(std::max<std::size_t>(1, m));
  const auto ctm = oracle::ctm_run(net, dx, dt_ctm, demand, out.config.horizon);

  const double t_end = out.times.back();
  json links = json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < net.link_count(); ++i) {
    const double engine_n = out.links[i].n_down.eval(t_end);
    const double ctm_n = ctm.n_down[i].eval(t_end);
    const double tol = std::max(50.0, 0.02 * std::max(std::abs(engine_n), std::abs(ctm_n)));
    const bool ok = std::abs(engine_n - ctm_n) <= tol;
    all_ok = all_ok && ok;
    links.push_back({{"link", out.link_ids[i]},
                     {"engine_N_down", engine_n},
                     {"ctm_N_down", ctm_n},
                     {"abs_diff", std::abs(engine_n - ctm_n)},
                     {"tolerance", tol},
                     {"engine_spillback_onset", optional_json(first_flag(out.spillback[i], out.times))},
                     {"ctm_spillback_onset", optional_json(ctm.spillback_onset[i])},
                     {"agree", ok}});
  }
  return {{"oracle", "ctm"}, {"dx", dx}, {"dt", dt_ctm}, {"links", links}, {"agree", all_ok}};
}

json compare_with_front_tracking(const Network& net, const SimOutput& out) {
  const std::size_t nl = net.link_count();
  std::vector<json> rows(nl);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < nl; i = next++) {
      const auto& link = out.links[i];
      Network single;
      single.add_link(out.link_ids[i], link.params);
      single.add_node("entry", Origin{link.params.C}, {}, {out.link_ids[i]});
      single.add_node("exit", Destination{StepProfile::from_series(out.config.dt, link.q_out)},
                      {out.link_ids[i]}, {});
      DemandProfiles dem{{"entry", StepProfile::from_series(out.config.dt, link.q_in)}};
      json row = {{"link", out.link_ids[i]}};
      try {
        const auto sol = oracle::front_track(single, dem, out.config.horizon);
        const double t_end = out.config.horizon;
        row["sup_N_up"] = sup_distance(link.n_up, sol.n_up[0], 0.0, t_end);
        row["sup_N_down"] = sup_distance(link.n_down, sol.n_down[0], 0.0, t_end);
        row["reference_C_dt"] = link.params.C * out.config.dt;
        row["events"] = sol.events;
      } catch (const std::exception& e) {
        row["error"] = e.what();
      }
      rows[i] = std::move(row);
    }
  };
  const std::size_t nthreads = std::min(oracle_threads(), std::max<std::size_t>(1, nl));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return {{"oracle", "fronttrack"}, {"links", rows}};
}

}  // namespace kinewave
