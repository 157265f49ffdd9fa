// Acceptance checks: one PASS/FAIL line per criterion.
//
// Exit status is 0 when the set of failing criteria equals the set passed
// with --expect-red (empty by default), so a criterion that is known to be
// out of reach stays visible as FAIL without breaking the suite, and one
// that starts passing is reported too.

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kinewave/ctm.hpp"
#include "kinewave/engine.hpp"
#include "kinewave/front_tracking.hpp"
#include "kinewave/junction.hpp"
#include "kinewave/link_dynamics.hpp"
#include "kinewave/output.hpp"
#include "kinewave/scenario.hpp"
#include "support/lp_oracle.hpp"
#include "support/scenarios.hpp"

using namespace kinewave;
using namespace kinewave::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::optional<double> first_time(const SimOutput& out, const std::function<bool(double)>& pred) {
  for (double t : out.times) {
    if (pred(t)) return t;
  }
  return std::nullopt;
}

std::string show(const std::optional<double>& t) {
  return t ? fmt("%.3f", *t) : std::string("never");
}

// 1. Every shipped link has C = k*w*rho_jam/(k+w) exactly.
Verdict fundamental_diagram() {
  const auto sc = seven_links();
  const auto start = Clock::now();
  std::size_t ok = 0;
  for (const auto& l : sc.network.links()) {
    const auto& p = l.params;
    if (p.C == p.k * p.w * p.rho_jam / (p.k + p.w)) ++ok;
  }
  const double secs = seconds_since(start);
  const bool pass = ok == sc.network.link_count() && secs < 1e-3;
  return {pass, fmt("%zu/%zu links consistent, %.1f us", ok, sc.network.link_count(), secs * 1e6)};
}

// 2. Closed-form junction solvers against the brute-force grid oracle.
Verdict junction_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 1000;
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < n; ++i) {
    const double cap = 750.0 + 2250.0 * u(gen);
    const double h = 1e-2 * cap;
    const double a = u(gen);
    const double d1 = cap * u(gen), s2 = cap * u(gen), s3 = cap * u(gen);
    const auto got = solve_diverge(d1, s2, s3, a, 1.0 - a);
    const auto ref = lp_diverge(d1, s2, s3, a, 1.0 - a, h);
    const double e = std::max({std::abs(got.q_out[0] - ref.q_out[0]),
                               std::abs(got.q_in[0] - ref.q_in[0]),
                               std::abs(got.q_in[1] - ref.q_in[1])});
    worst = std::max(worst, e / cap);
    if (e > h) ++bad;
  }
  for (int i = 0; i < n; ++i) {
    const double cap = 750.0 + 2250.0 * u(gen);
    const double h = 1e-2 * cap;
    const double p = 0.05 + 1.9 * u(gen);
    const double d4 = cap * u(gen), d5 = cap * u(gen), s6 = cap * u(gen);
    const auto got = solve_merge(d4, d5, s6, p);
    const auto ref = lp_merge(d4, d5, s6, p, h);
    const double e = std::max({std::abs(got.q_out[0] - ref.q_out[0]),
                               std::abs(got.q_out[1] - ref.q_out[1]),
                               std::abs(got.q_in[0] - ref.q_in[0])});
    worst = std::max(worst, e / cap);
    if (e > h) ++bad;
  }
  const double secs = seconds_since(start);
  return {bad == 0 && secs < 10.0,
          fmt("%d diverge + %d merge instances, %d outside 1e-2*C, worst %.2e*C, %.2f s", n, n,
              bad, worst, secs)};
}

// 3. Junction conservation per step and vehicle balance at the horizon.
Verdict conservation() {
  const auto sc = seven_links();
  const auto start = Clock::now();
  const auto out = run(sc.network, sc.demand, sc.sim);
  const double secs = seconds_since(start);
  double worst = 0.0;
  for (const auto& node : sc.network.nodes()) {
    if (std::holds_alternative<Origin>(node.kind) || std::holds_alternative<Destination>(node.kind)) {
      continue;
    }
    for (std::size_t n = 0; n + 1 < out.times.size(); ++n) {
      double in = 0.0, outflow = 0.0;
      for (auto i : node.incoming) in += out.links[i].q_out[n];
      for (auto j : node.outgoing) outflow += out.links[j].q_in[n];
      worst = std::max(worst, std::abs(in - outflow) / std::max(1.0, in));
    }
  }
  const double balance = std::abs(vehicle_balance(sc.network, out));
  return {worst <= 1e-9 && balance <= 1e-6 && secs < 5.0,
          fmt("node residual %.2e rel, balance %.2e veh, run %.3f s", worst, balance, secs)};
}

// 4. Exact delays: L/k through an empty link, L/w back through a jammed one.
Verdict transport() {
  SimConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 3.0;

  const auto free = single_link(kI1, constant_from(0.5, 1500));
  const auto a = run(free.net, free.demand, cfg);
  const auto lag_k = static_cast<std::size_t>(std::llround(kI1.L / kI1.k / cfg.dt));
  double err_k = 0.0;
  const auto& fl = a.links[0];
  for (std::size_t n = 0; n < fl.q_out.size(); ++n) {
    const double expected = n < lag_k ? 0.0 : fl.q_in[n - lag_k];
    err_k = std::max(err_k, std::abs(fl.q_out[n] - expected));
  }
  for (double t : a.times) {
    err_k = std::max(err_k, std::abs(fl.n_down.eval(t) - fl.n_up.eval(t - kI1.L / kI1.k)));
  }

  // I4 jams behind a closed exit, then discharges at 500 veh/h from t = 1.
  const auto jam = single_link(kI4, StepProfile::constant(750), StepProfile({0.0, 1.0}, {0, 500}));
  const auto b = run(jam.net, jam.demand, cfg);
  const auto& jl = b.links[0];
  const auto lag_w = static_cast<std::size_t>(std::llround(kI4.L / kI4.w / cfg.dt));
  const auto jammed_from = static_cast<std::size_t>(std::llround(0.4 / cfg.dt));
  double err_w = 0.0;
  bool held = true;
  for (std::size_t n = jammed_from; n < jl.q_in.size(); ++n) {
    err_w = std::max(err_w, std::abs(jl.q_in[n] - jl.q_out[n - lag_w]));
    held = held && b.spillback[0][n] == 1;
  }
  return {err_k <= 1e-9 && err_w <= 1e-9 && held,
          fmt("L/k delay error %.1e, L/w delay error %.1e, jam held %s", err_k, err_w,
              held ? "yes" : "no")};
}

// 5. Convergence to exact front tracking on five Riemann scenarios.
Verdict oracle_convergence() {
  struct Named {
    const char* name;
    Case c;
    double horizon;
  };
  // Inflows switch on at 1/60 h so no front ever lands on a grid point.
  const double t0 = 1.0 / 60.0;
  std::vector<Named> cases;
  cases.push_back({"queue", single_link(kI1, constant_from(t0, 1500), StepProfile::constant(600)), 2.0});
  cases.push_back({"blocked-diverge",
                   diverge_case(kI1, kI2, kI1, 0.5, constant_from(t0, 1440), std::nullopt,
                                StepProfile::constant(0)),
                   2.4});
  cases.push_back({"merge",
                   merge_case(kI1, kI4, kI2, 0.5, constant_from(t0, 700), constant_from(t0, 400),
                              StepProfile::constant(900)),
                   2.0});
  cases.push_back({"discharge",
                   single_link(kI1, constant_from(t0, 1500), StepProfile({0.0, 0.5 + t0}, {0, 3000})),
                   2.0});
  cases.push_back({"pulse", single_link(kI4, StepProfile({t0, 0.3 + t0}, {600, 0}), StepProfile::constant(300)),
                   2.0});

  bool pass = true;
  std::string detail;
  for (const auto& [name, c, horizon] : cases) {
    const auto exact = oracle::front_track(c.net, c.demand, horizon);
    std::vector<double> errs;
    bool bounded = true;
    for (double dt : {0.05, 0.025, 0.0125}) {
      SimConfig cfg;
      cfg.dt = dt;
      cfg.horizon = horizon;
      const auto out = run(c.net, c.demand, cfg);
      double e = 0.0;
      for (std::size_t i = 0; i < c.net.link_count(); ++i) {
        const double cap = c.net.link(i).params.C;
        const double err = std::max(sup_distance(out.links[i].n_up, exact.n_up[i], 0.0, horizon),
                                    sup_distance(out.links[i].n_down, exact.n_down[i], 0.0, horizon));
        bounded = bounded && err <= cap * dt;
        e = std::max(e, err / cap);
      }
      errs.push_back(e);
    }
    const double r1 = errs[0] / errs[1];
    const double r2 = errs[1] / errs[2];
    const bool halving = r1 >= 1.6 && r1 <= 2.4 && r2 >= 1.6 && r2 <= 2.4;
    pass = pass && bounded && halving;
    detail += fmt("%s%s ratios %.2f/%.2f", detail.empty() ? "" : "; ", name, r1, r2);
  }
  return {pass, detail};
}

// 6. Cell transmission cross-check on the shipped scenario.
Verdict ctm_cross_check() {
  const auto sc = seven_links();
  const auto out = run(sc.network, sc.demand, sc.sim);
  const double dx = 0.05;
  const auto ctm = oracle::ctm_run(sc.network, dx, 1.0 / 1200.0, sc.demand, sc.sim.horizon);
  bool pass = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < sc.network.link_count(); ++i) {
    const double a = out.links[i].n_down.eval(sc.sim.horizon);
    const double b = ctm.n_down[i].eval(sc.sim.horizon);
    worst = std::max(worst, std::abs(a - b));
    pass = pass && std::abs(a - b) <= std::max(50.0, 0.02 * a);
  }
  std::string detail = fmt("worst N_down gap %.3g veh", worst);
  for (const char* id : {"I3", "I4"}) {
    const auto i = sc.network.link_index(id);
    const auto engine = first_time(out, [&](double t) { return detect_spillback(out.links[i], t, sc.sim.eps_n); });
    const auto cell = ctm.spillback_onset[i];
    const bool agree = engine.has_value() == cell.has_value() &&
                       (!engine || std::abs(*engine - *cell) <= 2.0 * sc.sim.dt);
    pass = pass && agree;
    detail += fmt("; %s onset engine %s ctm %s", id, show(engine).c_str(), show(cell).c_str());
  }
  return {pass, detail};
}

// 7. Qualitative congestion pattern of the shipped scenario.
Verdict qualitative() {
  const auto sc = seven_links();
  const auto out = run(sc.network, sc.demand, sc.sim);
  const auto& net = sc.network;
  const double eps = sc.sim.eps_n;
  auto link = [&](const char* id) -> const LinkState& { return out.links[net.link_index(id)]; };
  auto spill = [&](const char* id) { return first_time(out, [&](double t) { return detect_spillback(link(id), t, eps); }); };
  auto congested_exit = [&](const char* id) {
    return first_time(out, [&](double t) { return !detect_freeflow_exit(link(id), t, eps); });
  };

  // (a) spillback on both merge approaches for a nonempty interval.
  auto spill_steps = [&](const char* id) {
    std::size_t n = 0;
    for (auto f : out.spillback[net.link_index(id)]) n += f;
    return n;
  };
  const auto s3 = spill_steps("I3");
  const auto s4 = spill_steps("I4");
  const bool a = s3 >= 2 && s4 >= 2;

  // (b) congestion starts at node c and reaches I1 and I2 later.
  const auto c3 = congested_exit("I3");
  const auto c4 = congested_exit("I4");
  std::optional<double> tc = c3;
  if (c4 && (!tc || *c4 < *tc)) tc = c4;
  const auto c1 = congested_exit("I1");
  const auto c2 = congested_exit("I2");
  const bool b = tc && (c1 || c2) && (!c1 || *tc < *c1) && (!c2 || *tc < *c2);

  // (c) the separating shock moves no faster than the fastest wave.
  double worst_jump = 0.0;
  bool c = true;
  for (const char* id : {"I1", "I2", "I3", "I4"}) {
    const auto& l = link(id);
    const double limit = std::max(l.params.k, l.params.w) * sc.sim.dt + l.params.L / 100.0;
    double prev = shock_position(l, 0.0, eps);
    for (std::size_t n = 1; n < out.times.size(); ++n) {
      const double x = shock_position(l, out.times[n], eps);
      worst_jump = std::max(worst_jump, std::abs(x - prev));
      c = c && std::abs(x - prev) <= limit;
      prev = x;
    }
  }

  const std::string detail =
      fmt("(a) %s: spillback steps I3=%zu I4=%zu; (b) %s: c congested %s, I6 spillback %s, I1 %s, "
          "I2 %s; (c) %s: max shock jump %.3f mi",
          a ? "ok" : "FAIL", s3, s4, b ? "ok" : "FAIL", show(tc).c_str(), show(spill("I6")).c_str(),
          show(c1).c_str(), show(c2).c_str(), c ? "ok" : "FAIL", worst_jump);
  return {a && b && c, detail};
}

// 8. At most one sign change of the shock indicator along every link.
Verdict shock_uniqueness() {
  const auto sc = seven_links();
  const auto out = run(sc.network, sc.demand, sc.sim);
  std::size_t worst = 0;
  std::size_t checked = 0;
  for (const auto& l : out.links) {
    const auto xs = linspace(0.0, l.params.L, 99);
    for (double t : out.times) {
      int sign = 0;
      std::size_t changes = 0;
      for (double x : xs) {
        const double g = shock_indicator(l, t, x);
        const int s = g > sc.sim.eps_n ? 1 : (g < -sc.sim.eps_n ? -1 : 0);
        if (s == 0) continue;
        if (sign != 0 && s != sign) ++changes;
        sign = s;
      }
      worst = std::max(worst, changes);
      ++checked;
    }
  }
  return {worst <= 1, fmt("%zu (link, step) pairs, max sign changes %zu", checked, worst)};
}

// 9. Response of the exit curves to a one-step inflow perturbation.
Verdict perturbation() {
  auto sc = seven_links();
  const double dt = sc.sim.dt;
  const double t0 = 1.0;
  double lo = 1e300, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    sc.reseed(seed);
    const auto base = run(sc.network, sc.demand, sc.sim);
    for (double eps : {1.0, 10.0, 100.0}) {
      auto demand = sc.demand;
      demand["o"] = demand["o"].perturbed(t0, t0 + dt, eps);
      const auto pert = run(sc.network, demand, sc.sim);
      double sum = 0.0;
      for (std::size_t i = 0; i < base.links.size(); ++i) {
        sum += sup_distance(base.links[i].n_down, pert.links[i].n_down, 0.0, sc.sim.horizon);
      }
      const double k = sum / (eps * dt);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  return {lo > 0.0 && hi <= 3.0 * lo, fmt("K in [%.3f, %.3f] over 10 seeds x 3 sizes, ratio %.3f", lo, hi, hi / lo)};
}

std::string sha256_of(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt("%02x", md[i]);
  return hex;
}

// 10. Two runs write byte-identical flows.csv.
Verdict determinism() {
  std::vector<std::string> digests;
  for (int r = 0; r < 2; ++r) {
    auto sc = seven_links();
    sc.regenerate_demand();
    const auto dir = std::filesystem::temp_directory_path() / fmt("kinewave_accept_%d", r);
    std::filesystem::remove_all(dir);
    emit_outputs(sc, run(sc.network, sc.demand, sc.sim), dir);
    digests.push_back(sha256_of(dir / "flows.csv"));
    std::filesystem::remove_all(dir);
  }
  return {digests[0] == digests[1], "sha256 " + digests[0].substr(0, 16) + "... / " + digests[1].substr(0, 16) + "..."};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinewave acceptance checks"};
  std::vector<int> expect_red;
  app.add_option("--expect-red", expect_red, "criteria known to fail");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, Verdict (*)()>> checks{
      {"fundamental diagram", fundamental_diagram},
      {"junction oracle", junction_oracle},
      {"conservation", conservation},
      {"transport delays", transport},
      {"front-tracking convergence", oracle_convergence},
      {"CTM cross-check", ctm_cross_check},
      {"qualitative pattern", qualitative},
      {"separating shock", shock_uniqueness},
      {"perturbation response", perturbation},
      {"determinism", determinism},
  };

  std::set<int> red;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Verdict v;
    try {
      v = checks[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) red.insert(id);
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, checks[i].first, v.detail.c_str());
  }

  const std::set<int> expected(expect_red.begin(), expect_red.end());
  std::printf("%zu/%zu passed", checks.size() - red.size(), checks.size());
  if (!expected.empty()) {
    std::printf("; expected red:");
    for (int id : expected) std::printf(" %d", id);
  }
  std::printf("\n");
  if (red != expected) {
    for (int id : red) {
      if (!expected.count(id)) std::printf("unexpected failure: %d\n", id);
    }
    for (int id : expected) {
      if (!red.count(id)) std::printf("expected failure now passes: %d\n", id);
    }
    return 1;
  }
  return 0;
}
