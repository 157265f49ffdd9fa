#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "kinewave/engine.hpp"
#include "kinewave/network.hpp"
#include "kinewave/scenario.hpp"

namespace kinewave {

inline constexpr const char* kVersion = "1.0.0";

/// "%.12g".
std::string format_number(double v);

/// Writes the requested CSV series and meta.json into `dir` (created if
/// needed). Throws SimulationError if a file cannot be written.
///   flows.csv       t,link,q_in,q_out     one row per step and link
///   cumulative.csv  t,link,N_up,N_down    one row per grid point and link
///   spillback.csv   t,link,flag
///   moskowitz_<link>.csv  t,x,N,is_shock  is_shock marks the x-grid point
///                                         nearest the separating shock
///   meta.json       scenario echo, config, seed, versions
void emit_outputs(const Scenario& scenario, const SimOutput& out,
                  const std::filesystem::path& dir);

}  // namespace kinewave
