#pragma once

#include <cstddef>

#include "json.hpp"
#include "kinewave/engine.hpp"
#include "kinewave/network.hpp"

namespace kinewave {

/// Worker threads for oracle comparisons: KINEWAVE_THREADS if set to a
/// positive integer, else the hardware concurrency (at least 1).
std::size_t oracle_threads();

/// Reruns the scenario with the cell transmission oracle (cells of `dx`,
/// step the largest divisor of the engine step with Courant number <= 1/2)
/// and reports per-link exit counts at the horizon and spillback onsets.
nlohmann::json compare_with_ctm(const Network& net, const DemandProfiles& demand,
                                const SimOutput& out, double dx = 0.05);

/// Replays every link in isolation under exact front tracking, driven by
/// the engine's own entry flows and with the engine's exit flows as sink
/// capacity, and reports the sup-norm gaps of both boundary curves.
nlohmann::json compare_with_front_tracking(const Network& net, const SimOutput& out);

}  // namespace kinewave
