#pragma once

// Spot-beam footprints, beam-center distance and dwell, serving-satellite
// timelines for an evenly phased single-plane constellation, and tracking-area
// update counting under moving beams.

#include <cstdint>
#include <string>
#include <vector>

#include "ntnlab/csv.hpp"
#include "ntnlab/geometry.hpp"
#include "ntnlab/intervals.hpp"

namespace ntn {

enum class BeamMode { moving, earth_fixed };

struct BeamConfig {
  double radius_km = 50.0;
  BeamMode mode = BeamMode::moving;
  /// Only meaningful for earth-fixed beams.
  GroundPoint center;

  /// Hard errors (radius <= 0) throw ConfigError.
  void validate() const;
  /// Soft findings: radius outside the plausible [10, 3000] km span.
  std::vector<std::string> warnings() const;

  friend bool operator==(const BeamConfig&, const BeamConfig&) = default;
};

struct ConstellationConfig {
  OrbitConfig orbit;
  int num_satellites = 1;

  void validate() const;
  /// Orbit of satellite i, phased 360/N degrees apart in the same plane.
  OrbitConfig satellite(int index) const;
};

enum class TaBinding { beam_bound, geo_bound };

struct TrackingAreaConfig {
  int cells_per_ta = 8;
  TaBinding binding = TaBinding::beam_bound;
  /// Registered TA list spans ids within (list_size - 1) of the last update.
  int registered_list_size = 1;

  void validate() const;

  friend bool operator==(const TrackingAreaConfig&, const TrackingAreaConfig&) = default;
};

struct ServingInterval {
  int sat_idx = -1;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
};

struct ServingTimeline {
  /// Served periods, sorted; adjacent entries change satellite (handover).
  std::vector<ServingInterval> intervals;
  /// Periods with no satellite above the minimum elevation.
  std::vector<Interval> gaps;

  std::size_t handovers() const;
};

struct TauSummary {
  std::uint64_t events = 0;
  double window_s = 0.0;

  double events_per_hour() const {
    return window_s > 0.0 ? static_cast<double>(events) * 3600.0 / window_s : 0.0;
  }
};

/// Surface distance between the UE and the nadir point of a moving beam.
double beam_center_distance_km(const EarthModel& earth, const OrbitConfig& orbit,
                               const GroundPoint& ue, double t_s);

/// Intervals in [t0, t1] during which a moving beam of the given radius covers the UE.
std::vector<Interval> beam_coverage_intervals(const EarthModel& earth, const OrbitConfig& orbit,
                                              const GroundPoint& ue, double radius_km,
                                              double t0_s, double t1_s, double step_s = 0.25);

/// Total coverage time of a moving beam over the UE within the window (one
/// pass when the window brackets a single pass). Zero if never covered.
double beam_dwell_time_s(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& ue,
                         const BeamConfig& beam, double t0_s, double t1_s, double step_s = 0.25);

/// Index of the highest visible satellite at t, or -1.
int serving_satellite(const EarthModel& earth, const ConstellationConfig& constellation,
                      const GroundPoint& ue, double min_elev_deg, double t_s);

ServingTimeline serving_timeline(const EarthModel& earth, const ConstellationConfig& constellation,
                                 const GroundPoint& ue, double min_elev_deg, double t0_s,
                                 double t1_s, double step_s = 1.0);

/// Tracking-area updates of a stationary idle UE over [t0, t1]. Moving-beam
/// cells are 2*radius long along the ground track and grouped cells_per_ta per
/// TA; the UE updates whenever its TA leaves the registered list.
TauSummary tau_events(const EarthModel& earth, const OrbitConfig& orbit, const BeamConfig& beam,
                      const TrackingAreaConfig& ta, const GroundPoint& ue, double t0_s,
                      double t1_s, double step_s = 1.0);

double tau_event_rate(const EarthModel& earth, const OrbitConfig& orbit, const BeamConfig& beam,
                      const TrackingAreaConfig& ta, const GroundPoint& ue, double t0_s,
                      double t1_s);

/// t_s,distance_km
const CsvSchema& beam_distance_csv_schema();
/// beam_center_distance_km at t0 + k*dt over [t0, t1].
void write_beam_distance_csv(std::ostream& out, const EarthModel& earth, const OrbitConfig& orbit,
                             const GroundPoint& ue, double t0_s, double t1_s, double dt_s);

/// sat_idx,t_start_s,t_end_s ; gaps are rows with sat_idx = -1.
const CsvSchema& timeline_csv_schema();

void write_timeline_csv(std::ostream& out, const ServingTimeline& timeline);

}  // namespace ntn
