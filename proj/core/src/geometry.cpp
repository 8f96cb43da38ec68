#include "ntnlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ntnlab/error.hpp"
#include "ntnlab/units.hpp"

namespace ntn {
namespace {

double wrap_longitude_deg(double deg) {
  double x = std::fmod(deg + 180.0, 360.0);
  if (x < 0.0) x += 360.0;
  return x - 180.0;
}

Vec3 unit_from_lat_lon(double lat_rad, double lon_rad) {
  return {std::cos(lat_rad) * std::cos(lon_rad), std::cos(lat_rad) * std::sin(lon_rad),
          std::sin(lat_rad)};
}

}  // namespace

void EarthModel::validate() const {
  detail::require(radius_km > 0.0, "earth radius_km must be > 0");
  detail::require(gm_km3_s2 > 0.0, "earth gm_km3_s2 must be > 0");
  detail::require(rotation_rate_rad_s >= 0.0, "earth rotation_rate_rad_s must be >= 0");
}

void OrbitConfig::validate() const {
  detail::require(altitude_km > 0.0, "orbit altitude_km must be > 0");
  detail::require(inclination_deg >= 0.0 && inclination_deg <= 180.0,
                  "orbit inclination_deg must be in [0, 180]");
  detail::require(std::isfinite(raan_deg) && std::isfinite(phase_deg),
                  "orbit raan_deg and phase_deg must be finite");
}

void GroundPoint::validate() const {
  detail::require(lat_deg >= -90.0 && lat_deg <= 90.0, "lat_deg must be in [-90, 90]");
  detail::require(lon_deg >= -180.0 && lon_deg < 180.0, "lon_deg must be in [-180, 180)");
}

double semi_major_axis_km(const EarthModel& earth, const OrbitConfig& orbit) {
  return earth.radius_km + orbit.altitude_km;
}

OrbitalMotion orbital_velocity_and_period(const EarthModel& earth, const OrbitConfig& orbit) {
  const double a = semi_major_axis_km(earth, orbit);
  const double speed = std::sqrt(earth.gm_km3_s2 / a);
  return {speed, 2.0 * std::numbers::pi * a / speed};
}

double geostationary_altitude_km(const EarthModel& earth) {
  const double w = earth.rotation_rate_rad_s;
  return std::cbrt(earth.gm_km3_s2 / (w * w)) - earth.radius_km;
}

SatelliteState propagate(const EarthModel& earth, const OrbitConfig& orbit, double t_s) {
  const double a = semi_major_axis_km(earth, orbit);
  const double speed = std::sqrt(earth.gm_km3_s2 / a);
  const double mean_motion = speed / a;

  const double u = deg_to_rad(orbit.phase_deg) + mean_motion * t_s;
  const double raan = deg_to_rad(orbit.raan_deg);
  const double inc = deg_to_rad(orbit.inclination_deg);
  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(inc), si = std::sin(inc);

  SatelliteState s;
  s.t_s = t_s;
  s.pos_km = Vec3{co * cu - so * su * ci, so * cu + co * su * ci, su * si} * a;
  s.vel_km_s = Vec3{-co * su - so * cu * ci, -so * su + co * cu * ci, cu * si} * speed;
  return s;
}

Vec3 ground_point_position(const EarthModel& earth, const GroundPoint& gp, double t_s) {
  const double lon = deg_to_rad(gp.lon_deg) + earth.effective_rotation_rate() * t_s;
  return unit_from_lat_lon(deg_to_rad(gp.lat_deg), lon) * earth.radius_km;
}

GroundState ground_point_state(const EarthModel& earth, const GroundPoint& gp, double t_s) {
  GroundState g;
  g.pos_km = ground_point_position(earth, gp, t_s);
  const double w = earth.effective_rotation_rate();
  g.vel_km_s = cross(Vec3{0.0, 0.0, w}, g.pos_km);
  return g;
}

LookAngles elevation_and_range(const SatelliteState& sat, const Vec3& gp_pos) {
  const Vec3 los = sat.pos_km - gp_pos;
  const Vec3 up = normalized(gp_pos);
  const double vertical = dot(los, up);
  const double horizontal = norm(los - up * vertical);
  return {rad_to_deg(std::atan2(vertical, horizontal)), norm(los)};
}

LookAngles look_angles(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                       double t_s) {
  return elevation_and_range(propagate(earth, orbit, t_s), ground_point_position(earth, gp, t_s));
}

std::vector<Pass> visibility_passes(const EarthModel& earth, const OrbitConfig& orbit,
                                    const GroundPoint& gp, double min_elev_deg, double t0_s,
                                    double t1_s, double coarse_step_s) {
  detail::require(t0_s < t1_s, "visibility window requires t0 < t1");
  detail::require(coarse_step_s > 0.0, "coarse_step_s must be > 0");

  const auto elevation = [&](double t) { return look_angles(earth, orbit, gp, t).elevation_deg; };
  const auto visible = [&](double t) { return elevation(t) >= min_elev_deg; };

  std::vector<Pass> passes;
  for (const Interval& iv : find_intervals(visible, t0_s, t1_s, coarse_step_s)) {
    Pass p;
    p.t_rise_s = iv.t_start_s;
    p.t_set_s = iv.t_end_s;
    p.t_peak_s = iv.duration_s() > 0.0 ? golden_section_max(elevation, iv.t_start_s, iv.t_end_s)
                                       : iv.t_start_s;
    p.max_elev_deg = elevation(p.t_peak_s);
    passes.push_back(p);
  }
  return passes;
}

GroundPoint ground_point_from_direction(const EarthModel& earth, const Vec3& dir, double t_s) {
  const double lat = std::atan2(dir.z, std::hypot(dir.x, dir.y));
  const double lon_inertial = std::atan2(dir.y, dir.x);
  const double lon_epoch = lon_inertial - earth.effective_rotation_rate() * t_s;
  return {rad_to_deg(lat), wrap_longitude_deg(rad_to_deg(lon_epoch))};
}

GroundPoint ground_track_point(const EarthModel& earth, const OrbitConfig& orbit, double t_s) {
  return ground_point_from_direction(earth, propagate(earth, orbit, t_s).pos_km, t_s);
}

GroundPoint offset_from_track(const EarthModel& earth, const OrbitConfig& orbit, double t_s,
                              double offset_km, OffsetDirection direction) {
  const SatelliteState sat = propagate(earth, orbit, t_s);
  const Vec3 up = normalized(sat.pos_km);
  const Vec3 axis = direction == OffsetDirection::along_track
                        ? normalized(sat.vel_km_s - up * dot(sat.vel_km_s, up))
                        : normalized(cross(sat.pos_km, sat.vel_km_s));
  const double arc = offset_km / earth.radius_km;
  return ground_point_from_direction(earth, up * std::cos(arc) + axis * std::sin(arc), t_s);
}

GroundPoint destination_point(const EarthModel& earth, const GroundPoint& origin,
                              double bearing_deg, double distance_km) {
  const double lat1 = deg_to_rad(origin.lat_deg);
  const double lon1 = deg_to_rad(origin.lon_deg);
  const double brg = deg_to_rad(bearing_deg);
  const double arc = distance_km / earth.radius_km;

  const double sin_lat2 =
      std::sin(lat1) * std::cos(arc) + std::cos(lat1) * std::sin(arc) * std::cos(brg);
  const double lat2 = std::asin(std::clamp(sin_lat2, -1.0, 1.0));
  const double lon2 = lon1 + std::atan2(std::sin(brg) * std::sin(arc) * std::cos(lat1),
                                        std::cos(arc) - std::sin(lat1) * sin_lat2);
  return {rad_to_deg(lat2), wrap_longitude_deg(rad_to_deg(lon2))};
}

double great_circle_distance_km(const EarthModel& earth, const Vec3& a, const Vec3& b) {
  return earth.radius_km * angle_between(a, b);
}

}  // namespace ntn
