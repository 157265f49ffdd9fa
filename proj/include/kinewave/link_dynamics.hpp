#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kinewave/cumulative_curve.hpp"
#include "kinewave/fundamental_diagram.hpp"

namespace kinewave {

/// Tolerance, in vehicles, for equality between cumulative counts.
inline constexpr double kDefaultEpsN = 1e-6;

/// Boundary history of one link on a uniform time grid of step `dt`.
/// q_in[n] / q_out[n] is the constant rate over [n*dt, (n+1)*dt); the
/// cumulative curves carry one breakpoint per grid point.
struct LinkState {
  LinkParams params;
  double dt;
  CumulativeCurve n_up;
  CumulativeCurve n_down;
  std::vector<double> q_in;
  std::vector<double> q_out;

  LinkState(const LinkParams& p, double step);

  double now() const { return n_up.last_time(); }
  std::size_t steps() const { return q_in.size(); }

  /// Records one step of boundary flows and extends both curves.
  void advance(double inflow, double outflow);

  /// Entry / exit rate at time tau, read as the mean rate over
  /// [tau, tau + dt]. On grid points this is the recorded step value;
  /// before t = 0 it is 0.
  double inflow_at(double tau) const;
  double outflow_at(double tau) const;
};

/// Sending flow at the exit at time t. Free-flow exit (the entry curve
/// delayed by L/k meets the exit curve): the entry rate delayed by L/k.
/// Queued exit: capacity, limited to the vehicles that can reach the exit
/// during [t, t + dt].
double demand(const LinkState& link, double t, double dt, double eps_n = kDefaultEpsN);

/// Receiving flow at the entrance at time t. Spillback (the entry curve meets
/// the exit curve delayed by L/w plus the jam storage): the exit rate delayed
/// by L/w. Otherwise capacity, limited to the free storage freed up by
/// t + dt.
double supply(const LinkState& link, double t, double dt, double eps_n = kDefaultEpsN);

/// The separating shock sits at the entrance: N_up(t) >= N_down(t - L/w) + rho_jam*L.
bool detect_spillback(const LinkState& link, double t, double eps_n = kDefaultEpsN);

/// The separating shock sits at the exit: N_up(t - L/k) <= N_down(t).
bool detect_freeflow_exit(const LinkState& link, double t, double eps_n = kDefaultEpsN);

/// Moskowitz surface N(t, x) on a (time, position) grid. Positions are
/// measured from the link entrance, so x in [0, L]. Row-major, one row per
/// time.
struct MoskowitzGrid {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> values;
  std::vector<double> shock;  // x*(t) per time

  double at(std::size_t ti, std::size_t xi) const { return values[ti * positions.size() + xi]; }
};

/// Lax-Hopf value at (t, x) from the two boundary curves:
/// min{ N_up(t - x/k), N_down(t - (L-x)/w) + rho_jam*(L-x) }.
double moskowitz_value(const LinkState& link, double t, double x);

/// The difference of the two Lax-Hopf candidates at (t, x). It is
/// nondecreasing in x; its sign change is the separating shock.
double shock_indicator(const LinkState& link, double t, double x);

MoskowitzGrid reconstruct_moskowitz(const LinkState& link, std::span<const double> t_grid,
                                    std::span<const double> x_grid,
                                    double eps_n = kDefaultEpsN);

/// Position of the separating shock at t: 0 when it rests at the entrance
/// (spillback), L when at the exit (free flow), else the sign change of
/// shock_indicator located by bisection to 1e-6 mile.
double shock_position(const LinkState& link, double t, double eps_n = kDefaultEpsN);

/// Evenly spaced grid with `intervals` + 1 points on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t intervals);

}  // namespace kinewave
