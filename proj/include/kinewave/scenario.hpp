#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "kinewave/engine.hpp"
#include "kinewave/network.hpp"

namespace kinewave {

/// Seeded Uniform(0, cap) departure rate, redrawn on every `step` inside
/// [begin, end] and zero elsewhere.
struct UniformDemand {
  double cap = 0.0;
  double begin = 0.0;
  double end = 0.0;
  std::uint64_t seed = 0;
  double step = 0.05;

  friend bool operator==(const UniformDemand&, const UniformDemand&) = default;
};

struct OutputRequest {
  bool flows = true;
  bool cumulative = true;
  bool spillback = true;
  bool moskowitz = false;
  std::size_t moskowitz_intervals = 50;  // x-grid intervals per link
};

struct Scenario {
  Network network;
  DemandProfiles demand;
  std::map<std::string, UniformDemand> uniform;  // origins with random demand
  SimConfig sim;
  OutputRequest outputs;

  /// Redraws every uniform demand profile for the current horizon.
  void regenerate_demand();
  /// Replaces the seed of every uniform demand and of the config.
  void reseed(std::uint64_t seed);
};

/// Parses and validates a scenario document. Unknown keys, missing or
/// mistyped fields and invalid networks raise ValidationError with the
/// offending field path.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_file(const std::filesystem::path& path);

/// Inverse of parse_scenario; uniform demands keep their generator settings.
nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace kinewave
