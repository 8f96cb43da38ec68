#pragma once

// Circular-orbit propagation on a spherical earth and point-to-satellite
// geometry. Angles are degrees at every interface, lengths km, times s.
//
// Frame: earth-centered inertial, x toward the epoch longitude 0 on the
// equator, z toward the north pole. With rotation enabled a ground point's
// longitude advances by rotation_rate * t.

#include <vector>

#include "ntnlab/intervals.hpp"
#include "ntnlab/vec3.hpp"

namespace ntn {

struct EarthModel {
  double radius_km = 6371.0;
  double gm_km3_s2 = 398600.4418;
  bool rotation_enabled = true;
  double rotation_rate_rad_s = 7.2921159e-5;

  void validate() const;
  /// Angular rate actually applied to ground points (0 when rotation is off).
  double effective_rotation_rate() const { return rotation_enabled ? rotation_rate_rad_s : 0.0; }

  friend bool operator==(const EarthModel&, const EarthModel&) = default;
};

struct OrbitConfig {
  double altitude_km = 600.0;
  double inclination_deg = 90.0;
  double raan_deg = 0.0;
  /// Argument of latitude at t = 0; 0 puts the satellite on the ascending node.
  double phase_deg = 0.0;

  void validate() const;

  friend bool operator==(const OrbitConfig&, const OrbitConfig&) = default;
};

struct GroundPoint {
  double lat_deg = 0.0;
  /// Longitude at epoch, in [-180, 180).
  double lon_deg = 0.0;

  void validate() const;

  friend bool operator==(const GroundPoint&, const GroundPoint&) = default;
};

struct SatelliteState {
  double t_s = 0.0;
  Vec3 pos_km;
  Vec3 vel_km_s;
};

/// Inertial position and velocity of a point on the surface.
struct GroundState {
  Vec3 pos_km;
  Vec3 vel_km_s;
};

struct OrbitalMotion {
  double speed_km_s = 0.0;
  double period_s = 0.0;
};

struct LookAngles {
  double elevation_deg = 0.0;
  double slant_range_km = 0.0;
};

struct Pass {
  double t_rise_s = 0.0;
  double t_set_s = 0.0;
  double t_peak_s = 0.0;
  double max_elev_deg = 0.0;

  double duration_s() const { return t_set_s - t_rise_s; }
};

enum class OffsetDirection { along_track, cross_track };

double semi_major_axis_km(const EarthModel& earth, const OrbitConfig& orbit);

/// Speed sqrt(mu/a) and period 2*pi*a/speed of the circular orbit.
OrbitalMotion orbital_velocity_and_period(const EarthModel& earth, const OrbitConfig& orbit);

/// Altitude whose circular period equals one earth rotation.
double geostationary_altitude_km(const EarthModel& earth);

SatelliteState propagate(const EarthModel& earth, const OrbitConfig& orbit, double t_s);

Vec3 ground_point_position(const EarthModel& earth, const GroundPoint& gp, double t_s);
GroundState ground_point_state(const EarthModel& earth, const GroundPoint& gp, double t_s);

/// Signed elevation above the local horizontal plane and straight-line range.
LookAngles elevation_and_range(const SatelliteState& sat, const Vec3& gp_pos);

/// Elevation and range of the satellite seen from `gp` at time t.
LookAngles look_angles(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                       double t_s);

/// Time intervals in [t0, t1] with elevation >= min_elev_deg, sorted and
/// disjoint. Boundaries are refined to well below 1 ms. A pass already in
/// progress at t0 (or still running at t1) is clipped to the window.
std::vector<Pass> visibility_passes(const EarthModel& earth, const OrbitConfig& orbit,
                                    const GroundPoint& gp, double min_elev_deg, double t0_s,
                                    double t1_s, double coarse_step_s = 1.0);

/// Converts an inertial surface direction observed at time t back to epoch
/// coordinates, so that ground_point_position(result, t) points along `dir`.
GroundPoint ground_point_from_direction(const EarthModel& earth, const Vec3& dir, double t_s);

/// Sub-satellite point at time t, in epoch coordinates.
GroundPoint ground_track_point(const EarthModel& earth, const OrbitConfig& orbit, double t_s);

/// Point displaced from the sub-satellite point at time t by a great-circle
/// arc of `offset_km`, either along the direction of motion or toward the
/// orbit normal. Negative offsets go the other way.
GroundPoint offset_from_track(const EarthModel& earth, const OrbitConfig& orbit, double t_s,
                              double offset_km, OffsetDirection direction);

/// Great-circle destination from `origin` (epoch coordinates).
GroundPoint destination_point(const EarthModel& earth, const GroundPoint& origin,
                              double bearing_deg, double distance_km);

/// Surface arc length between two points given as vectors from the center.
double great_circle_distance_km(const EarthModel& earth, const Vec3& a, const Vec3& b);

}  // namespace ntn
