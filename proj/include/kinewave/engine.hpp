#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kinewave/cumulative_curve.hpp"
#include "kinewave/link_dynamics.hpp"
#include "kinewave/network.hpp"

namespace kinewave {

enum class OriginModel {
  PointQueue,   // vertical queue at the origin node
  VirtualLink,  // long virtual link with the first link's diagram
};

struct SimConfig {
  double dt = 0.05;       // [h]
  double horizon = 5.0;   // [h]
  std::uint64_t seed = 0;
  double eps_n = kDefaultEpsN;  // [veh]
  OriginModel origin_model = OriginModel::PointQueue;
  double virtual_length = 100.0;  // [mile], VirtualLink only

  /// dt > 0, dt <= min over links of min(L/k, L/w), horizon a multiple of dt.
  void validate(const Network& net) const;
  std::size_t steps() const;
};

/// Desired vs released departures at one origin node.
struct OriginQueue {
  std::string node;
  CumulativeCurve desired;
  CumulativeCurve released;
  std::vector<double> queue;  // per grid point, desired - released
  std::optional<LinkState> virtual_link;

  OriginQueue(std::string id, double desired_cap, double release_cap);
};

/// Mutable engine state on the shared time grid.
struct SimulationState {
  std::size_t n = 0;  // current grid index, t = n * dt
  std::vector<LinkState> links;
  std::vector<OriginQueue> origins;  // one per origin node, in node order
};

/// Fresh state: every link empty, every queue zero.
SimulationState initial_state(const Network& net, const DemandProfiles& demand,
                              const SimConfig& cfg);

/// One explicit step over [t, t + dt]: demands and supplies from histories
/// through t, junction fluxes from the merge/diverge solvers, origin release
/// min{h + queue/dt, C_origin, S}, sink discharge min{D, sink capacity}, then
/// all curves advanced with rates held constant.
/// Throws SimulationError naming the node if any flow leaves [0, C + 1e-9].
void step(const Network& net, const DemandProfiles& demand, const SimConfig& cfg,
          SimulationState& state);

struct SimOutput {
  SimConfig config;
  std::vector<double> times;  // grid points 0 .. steps
  std::vector<std::string> link_ids;
  std::vector<LinkState> links;
  std::vector<std::vector<std::uint8_t>> spillback;  // [link][grid point]
  std::vector<OriginQueue> origins;
  double wall_seconds = 0.0;
};

/// Validates network and config and integrates from 0 to the horizon.
SimOutput run(const Network& net, const DemandProfiles& demand, const SimConfig& cfg);

/// Uniform(0, cap) draw per grid step inside [t_begin, t_end], zero outside,
/// for the steps of [0, horizon). Draws come from std::mt19937_64 seeded with
/// `seed`, mapped to [0, 1) through the top 53 bits, so the series is
/// reproducible across platforms and standard libraries.
std::vector<double> generate_inflow(double cap, double t_begin, double t_end, double dt,
                                    double horizon, std::uint64_t seed);

/// Vehicles released by all origins minus vehicles on links and vehicles
/// delivered to destinations at the last grid point.
double vehicle_balance(const Network& net, const SimOutput& out);

}  // namespace kinewave
