#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kinewave/cumulative_curve.hpp"
#include "kinewave/fundamental_diagram.hpp"
#include "kinewave/network.hpp"

namespace kinewave::oracle {

/// A discontinuity travelling at constant speed between two constant states.
struct Front {
  double position = 0.0;  // [mile] from the link entrance
  double speed = 0.0;     // [mile/h]
  TrafficState left;
  TrafficState right;
};

/// Exact Riemann solution for the triangular flux, fronts placed at 0.
/// A compressive jump is one shock at the Rankine-Hugoniot speed; an
/// expansive jump from congested to free is two fronts at -w and k around
/// the capacity state; jumps within one branch are single fronts at k or -w.
std::vector<Front> solve_riemann(const TrafficState& left, const TrafficState& right,
                                 const LinkParams& p);

/// Piecewise-constant initial data on one link: states[i] on
/// [breakpoints[i-1], breakpoints[i]) with breakpoints inside (0, L).
struct InitialData {
  std::vector<double> breakpoints;
  std::vector<TrafficState> states;
};

/// Fronts on every link right after one event.
struct Snapshot {
  double time = 0.0;
  std::vector<std::vector<double>> densities;  // [link] region densities
  std::vector<std::vector<double>> positions;  // [link] front positions at `time`
  std::vector<std::vector<double>> speeds;     // [link] front speeds
};

/// A wave reaching a merge or diverge node and the resulting change of the
/// junction throughput.
struct JunctionInteraction {
  double time = 0.0;
  std::size_t node = 0;
  std::size_t link = 0;
  double wave_flux_jump = 0.0;  // f(new boundary state) - f(old boundary state)
  double throughput_before = 0.0;
  double throughput_after = 0.0;
  std::vector<double> flows_before;  // node q_out then q_in, in node order
  std::vector<double> flows_after;
};

struct FrontTrackingSolution {
  double horizon = 0.0;
  std::vector<LinkParams> params;
  std::vector<Snapshot> snapshots;  // one per event, time-ordered
  std::vector<CumulativeCurve> n_up;
  std::vector<CumulativeCurve> n_down;
  std::vector<JunctionInteraction> interactions;
  std::size_t events = 0;

  std::vector<double> event_times() const;
  /// Fronts of a link at time t.
  std::vector<Front> fronts(std::size_t link, double t) const;
};

struct FrontTrackOptions {
  std::size_t event_cap = 1'000'000;
};

/// Event-driven exact evolution on the given network with piecewise-constant
/// origin demand and sink capacities: fronts move linearly; at the earliest
/// collision, boundary arrival, or boundary-data change the local Riemann
/// problem (or junction problem) is re-solved. Intended for single links and
/// single junctions. Links without an entry in `initial` start empty.
/// Throws SimulationError if the event cap is exceeded.
FrontTrackingSolution front_track(const Network& net, const DemandProfiles& demand,
                                  double horizon,
                                  const std::map<std::size_t, InitialData>& initial = {},
                                  const FrontTrackOptions& options = {});

/// State at (t, x); on a front the state to its right.
TrafficState sample(const FrontTrackingSolution& sol, std::size_t link, double t, double x);

/// Vehicles on the link at time t by integrating the density.
double link_mass(const FrontTrackingSolution& sol, std::size_t link, double t);

/// Total variation of the flux along the link at time t.
double flux_variation(const FrontTrackingSolution& sol, std::size_t link, double t);

}  // namespace kinewave::oracle
