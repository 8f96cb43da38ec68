#pragma once

// INI-style scenario files:
//
//   # comment
//   [orbit]
//   altitude_km = 600
//   [sim]
//   harq.enabled = off
//
// Sections: orbit, earth, ue (alias ue.0, the reference UE), ue.N, carrier,
// beam, constellation, tracking, access, sim, run. Unknown sections or keys,
// malformed values and out-of-range values raise ScenarioError with the line.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ntnlab/access.hpp"
#include "ntnlab/coverage.hpp"
#include "ntnlab/error.hpp"
#include "ntnlab/geometry.hpp"
#include "ntnlab/link_metrics.hpp"
#include "ntnlab/stack_sim.hpp"

namespace ntn {

class ScenarioError : public ConfigError {
 public:
  ScenarioError(int line, const std::string& msg);
  /// 1-based line of the offending entry; 0 for whole-file checks.
  int line() const { return line_; }

 private:
  int line_;
};

struct AccessSettings {
  PrachConfig prach;
  double feeder_offset_ms = 0.0;

  friend bool operator==(const AccessSettings&, const AccessSettings&) = default;
};

struct RunSettings {
  double t0_s = -600.0;
  double t1_s = 600.0;
  double dt_s = 1.0;
  std::uint64_t seed = 1;
  double min_elev_deg = 10.0;
  std::int64_t bin_width_us = 10000;

  void validate() const;

  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct Scenario {
  OrbitConfig orbit;
  EarthModel earth;
  /// ues[0] is the reference UE.
  std::vector<GroundPoint> ues{GroundPoint{}};
  CarrierConfig carrier;
  CarrierConfig uplink_carrier;
  BeamConfig beam;
  int num_satellites = 1;
  TrackingAreaConfig tracking;
  AccessSettings access;
  /// traffic.rng_seed is ignored; run.seed feeds the simulator.
  StackScenario sim;
  RunSettings run;

  void validate() const;
  ConstellationConfig constellation() const { return {orbit, num_satellites}; }
  /// Stack configuration with the seed taken from run.seed.
  StackScenario stack() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; every field is written, doubles with 17 significant
/// digits, so parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace ntn
