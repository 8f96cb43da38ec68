#include "ntnlab/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "ntnlab/error.hpp"

namespace ntn {
namespace {

double wrap_pi(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a < 0.0) a += two_pi;
  return a - std::numbers::pi;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Angle (rad) from the sub-satellite point to the UE's projection onto the
/// orbit plane, positive ahead of the satellite.
double along_track_angle(const SatelliteState& sat, const Vec3& ue_pos) {
  const Vec3 r_hat = normalized(sat.pos_km);
  const Vec3 v_hat = normalized(sat.vel_km_s);
  return std::atan2(dot(ue_pos, v_hat), dot(ue_pos, r_hat));
}

}  // namespace

void BeamConfig::validate() const {
  detail::require(radius_km > 0.0 && std::isfinite(radius_km), "beam radius_km must be > 0");
  if (mode == BeamMode::earth_fixed) center.validate();
}

std::vector<std::string> BeamConfig::warnings() const {
  std::vector<std::string> w;
  if (radius_km < 10.0 || radius_km > 3000.0) {
    w.push_back("beam radius " + std::to_string(radius_km) +
                " km is outside the typical 10-3000 km span");
  }
  return w;
}

void ConstellationConfig::validate() const {
  orbit.validate();
  detail::require(num_satellites >= 1, "num_satellites must be >= 1");
}

OrbitConfig ConstellationConfig::satellite(int index) const {
  OrbitConfig o = orbit;
  o.phase_deg = orbit.phase_deg + 360.0 * index / num_satellites;
  return o;
}

void TrackingAreaConfig::validate() const {
  detail::require(cells_per_ta >= 1, "cells_per_ta must be >= 1");
  detail::require(registered_list_size >= 1, "registered_list_size must be >= 1");
}

std::size_t ServingTimeline::handovers() const {
  std::size_t n = 0;
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].t_start_s == intervals[i - 1].t_end_s) ++n;
  }
  return n;
}

double beam_center_distance_km(const EarthModel& earth, const OrbitConfig& orbit,
                               const GroundPoint& ue, double t_s) {
  return great_circle_distance_km(earth, ground_point_position(earth, ue, t_s),
                                  propagate(earth, orbit, t_s).pos_km);
}

std::vector<Interval> beam_coverage_intervals(const EarthModel& earth, const OrbitConfig& orbit,
                                              const GroundPoint& ue, double radius_km,
                                              double t0_s, double t1_s, double step_s) {
  detail::require(t0_s < t1_s, "coverage window requires t0 < t1");
  detail::require(step_s > 0.0, "coverage step must be > 0");
  const auto covered = [&](double t) {
    return beam_center_distance_km(earth, orbit, ue, t) <= radius_km;
  };
  return find_intervals(covered, t0_s, t1_s, step_s);
}

double beam_dwell_time_s(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& ue,
                         const BeamConfig& beam, double t0_s, double t1_s, double step_s) {
  beam.validate();
  detail::require(beam.mode == BeamMode::moving, "dwell time is defined for moving beams");
  double total = 0.0;
  for (const Interval& iv :
       beam_coverage_intervals(earth, orbit, ue, beam.radius_km, t0_s, t1_s, step_s)) {
    total += iv.duration_s();
  }
  return total;
}

int serving_satellite(const EarthModel& earth, const ConstellationConfig& constellation,
                      const GroundPoint& ue, double min_elev_deg, double t_s) {
  const Vec3 ue_pos = ground_point_position(earth, ue, t_s);
  int best = -1;
  double best_elev = min_elev_deg;
  for (int i = 0; i < constellation.num_satellites; ++i) {
    const double elev =
        elevation_and_range(propagate(earth, constellation.satellite(i), t_s), ue_pos)
            .elevation_deg;
    if (elev >= best_elev && (best < 0 || elev > best_elev)) {
      best = i;
      best_elev = elev;
    }
  }
  return best;
}

ServingTimeline serving_timeline(const EarthModel& earth, const ConstellationConfig& constellation,
                                 const GroundPoint& ue, double min_elev_deg, double t0_s,
                                 double t1_s, double step_s) {
  constellation.validate();
  detail::require(t0_s < t1_s, "timeline window requires t0 < t1");
  detail::require(step_s > 0.0, "timeline step must be > 0");

  const auto serving = [&](double t) {
    return serving_satellite(earth, constellation, ue, min_elev_deg, t);
  };

  ServingTimeline out;
  const auto close = [&](int idx, double start, double end) {
    if (idx >= 0) {
      out.intervals.push_back({idx, start, end});
    } else {
      out.gaps.push_back({start, end});
    }
  };

  const std::vector<double> grid = sample_grid(t0_s, t1_s, step_s);
  int current = serving(grid.front());
  double start = t0_s;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const int next = serving(grid[k]);
    if (next == current) continue;
    const auto still_current = [&](double t) { return serving(t) == current; };
    const double boundary = bisect_boundary(still_current, grid[k - 1], grid[k]);
    close(current, start, boundary);
    current = next;
    start = boundary;
  }
  close(current, start, t1_s);
  return out;
}

TauSummary tau_events(const EarthModel& earth, const OrbitConfig& orbit, const BeamConfig& beam,
                      const TrackingAreaConfig& ta, const GroundPoint& ue, double t0_s,
                      double t1_s, double step_s) {
  beam.validate();
  ta.validate();
  detail::require(t0_s < t1_s, "TAU window requires t0 < t1");
  detail::require(step_s > 0.0, "TAU step must be > 0");

  TauSummary summary;
  summary.window_s = t1_s - t0_s;
  if (ta.binding == TaBinding::geo_bound) {
    // Cells and TAs are fixed on the ground and the UE does not move.
    return summary;
  }

  const double cell_len_km = 2.0 * beam.radius_km;
  const auto ta_of = [&](double along_km) {
    const auto cell = static_cast<std::int64_t>(std::floor(along_km / cell_len_km));
    return floor_div(cell, ta.cells_per_ta);
  };

  const auto angle_at = [&](double t) {
    return along_track_angle(propagate(earth, orbit, t), ground_point_position(earth, ue, t));
  };

  double prev_angle = angle_at(t0_s);
  double unwrapped = prev_angle;
  std::int64_t registered = ta_of(earth.radius_km * unwrapped);
  const std::int64_t reach = ta.registered_list_size - 1;

  for (double t : sample_grid(t0_s, t1_s, step_s)) {
    const double angle = angle_at(t);
    unwrapped += wrap_pi(angle - prev_angle);
    prev_angle = angle;
    const std::int64_t current = ta_of(earth.radius_km * unwrapped);
    if (current < registered - reach || current > registered + reach) {
      ++summary.events;
      registered = current;
    }
  }
  return summary;
}

double tau_event_rate(const EarthModel& earth, const OrbitConfig& orbit, const BeamConfig& beam,
                      const TrackingAreaConfig& ta, const GroundPoint& ue, double t0_s,
                      double t1_s) {
  return tau_events(earth, orbit, beam, ta, ue, t0_s, t1_s).events_per_hour();
}

const CsvSchema& beam_distance_csv_schema() {
  static const CsvSchema schema{"beam_distance", {"t_s", "distance_km"}, 6};
  return schema;
}

void write_beam_distance_csv(std::ostream& out, const EarthModel& earth, const OrbitConfig& orbit,
                             const GroundPoint& ue, double t0_s, double t1_s, double dt_s) {
  detail::require(dt_s > 0.0 && std::isfinite(dt_s), "dt_s must be > 0");
  detail::require(t0_s < t1_s, "requires t0_s < t1_s");
  CsvWriter w(out, beam_distance_csv_schema());
  const auto n = static_cast<long long>(std::floor((t1_s - t0_s) / dt_s + 1e-9));
  for (long long k = 0; k <= n; ++k) {
    const double t = t0_s + static_cast<double>(k) * dt_s;
    w.row({t, beam_center_distance_km(earth, orbit, ue, t)});
  }
}

const CsvSchema& timeline_csv_schema() {
  static const CsvSchema schema{"timeline", {"sat_idx", "t_start_s", "t_end_s"}, 10};
  return schema;
}

void write_timeline_csv(std::ostream& out, const ServingTimeline& timeline) {
  struct Row {
    std::int64_t idx;
    double start;
    double end;
  };
  std::vector<Row> rows;
  for (const auto& iv : timeline.intervals) rows.push_back({iv.sat_idx, iv.t_start_s, iv.t_end_s});
  for (const auto& g : timeline.gaps) rows.push_back({-1, g.t_start_s, g.t_end_s});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.start < b.start; });

  CsvWriter w(out, timeline_csv_schema());
  for (const Row& r : rows) w.row({r.idx, r.start, r.end});
}

}  // namespace ntn
