#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kinewave/cumulative_curve.hpp"
#include "kinewave/network.hpp"

namespace kinewave::oracle {

struct CtmResult {
  double dx = 0.0;
  double dt = 0.0;
  std::vector<CumulativeCurve> n_up;    // per link
  std::vector<CumulativeCurve> n_down;  // per link
  // First time the entrance cell of each link is congested.
  std::vector<std::optional<double>> spillback_onset;
  std::vector<std::vector<double>> final_density;  // per link, per cell
};

/// Godunov (cell transmission) discretization of every link, with the same
/// node rules as the engine: merge and diverge solvers, point-queue origins,
/// sinks limited by their supply profile.
/// Throws ValidationError unless dt <= dx / max(k, w) on every link, dx
/// divides every link length, and horizon is a multiple of dt.
CtmResult ctm_run(const Network& net, double dx, double dt, const DemandProfiles& demand,
                  double horizon);

}  // namespace kinewave::oracle
