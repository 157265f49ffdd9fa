#include "kinewave/link_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "kinewave/errors.hpp"

namespace kinewave {

namespace {

double rate_at(const std::vector<double>& history, const CumulativeCurve& curve,
               double tau, double dt) {
  const double pos = tau / dt;
  const double idx = std::round(pos);
  if (std::abs(pos - idx) < 1e-9) {
    if (idx < 0.0) return 0.0;
    const auto i = static_cast<std::size_t>(idx);
    if (i >= history.size()) {
      throw SimulationError("flow history read past the current step");
    }
    return history[i];
  }
  if (tau + dt <= 0.0) return 0.0;
  return (curve.eval_strict(tau + dt) - curve.eval(tau)) / dt;
}

}  // namespace

LinkState::LinkState(const LinkParams& p, double step)
    : params(p), dt(step), n_up(p.C), n_down(p.C) {}

void LinkState::advance(double inflow, double outflow) {
  const double t_next = static_cast<double>(q_in.size() + 1) * dt;
  n_up.append(t_next, inflow);
  n_down.append(t_next, outflow);
  q_in.push_back(inflow);
  q_out.push_back(outflow);
}

double LinkState::inflow_at(double tau) const { return rate_at(q_in, n_up, tau, dt); }

double LinkState::outflow_at(double tau) const { return rate_at(q_out, n_down, tau, dt); }

double demand(const LinkState& link, double t, double dt, double eps_n) {
  const auto& p = link.params;
  const double tau = t - p.free_flow_time();
  const double arrived = link.n_up.eval_strict(tau);
  const double departed = link.n_down.eval_strict(t);
  double rate;
  if (arrived - departed <= eps_n) {
    rate = link.inflow_at(tau);
  } else {
    // Queue at the exit: discharge at capacity, but never let the exit curve
    // overtake the entry curve delayed by the free-flow travel time.
    const double reachable = link.n_up.eval_strict(tau + dt) - departed;
    rate = std::min(p.C, reachable / dt);
  }
  return std::clamp(rate, 0.0, p.C);
}

double supply(const LinkState& link, double t, double dt, double eps_n) {
  const auto& p = link.params;
  const double tau = t - p.backward_wave_time();
  const double storage = link.n_down.eval_strict(tau) + p.jam_vehicles();
  const double entered = link.n_up.eval_strict(t);
  double rate;
  if (storage - entered <= eps_n) {
    rate = link.outflow_at(tau);
  } else {
    const double room = link.n_down.eval_strict(tau + dt) + p.jam_vehicles() - entered;
    rate = std::min(p.C, room / dt);
  }
  return std::clamp(rate, 0.0, p.C);
}

bool detect_spillback(const LinkState& link, double t, double eps_n) {
  const auto& p = link.params;
  return link.n_up.eval(t) >=
         link.n_down.eval(t - p.backward_wave_time()) + p.jam_vehicles() - eps_n;
}

bool detect_freeflow_exit(const LinkState& link, double t, double eps_n) {
  const auto& p = link.params;
  return link.n_up.eval(t - p.free_flow_time()) <= link.n_down.eval(t) + eps_n;
}

double moskowitz_value(const LinkState& link, double t, double x) {
  const auto& p = link.params;
  const double from_up = link.n_up.eval(t - x / p.k);
  const double from_down = link.n_down.eval(t - (p.L - x) / p.w) + p.rho_jam * (p.L - x);
  return std::min(from_up, from_down);
}

double shock_indicator(const LinkState& link, double t, double x) {
  const auto& p = link.params;
  return link.n_up.eval(t - x / p.k) -
         (link.n_down.eval(t - (p.L - x) / p.w) + p.rho_jam * (p.L - x));
}

double shock_position(const LinkState& link, double t, double eps_n) {
  const double len = link.params.L;
  if (shock_indicator(link, t, 0.0) >= -eps_n) return 0.0;
  if (shock_indicator(link, t, len) <= eps_n) return len;
  double lo = 0.0;
  double hi = len;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (shock_indicator(link, t, mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MoskowitzGrid reconstruct_moskowitz(const LinkState& link, std::span<const double> t_grid,
                                    std::span<const double> x_grid, double eps_n) {
  MoskowitzGrid g;
  g.times.assign(t_grid.begin(), t_grid.end());
  g.positions.assign(x_grid.begin(), x_grid.end());
  g.values.reserve(t_grid.size() * x_grid.size());
  g.shock.reserve(t_grid.size());
  for (double t : t_grid) {
    for (double x : x_grid) g.values.push_back(moskowitz_value(link, t, x));
    g.shock.push_back(shock_position(link, t, eps_n));
  }
  return g;
}

std::vector<double> linspace(double lo, double hi, std::size_t intervals) {
  std::vector<double> v(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
  }
  return v;
}

}  // namespace kinewave
