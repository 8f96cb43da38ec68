#include "ntnlab/link_metrics.hpp"

#include <cmath>

#include "ntnlab/error.hpp"

namespace ntn {

void CarrierConfig::validate() const {
  detail::require(f_c_hz > 0.0 && std::isfinite(f_c_hz), "carrier f_c_hz must be > 0");
}

namespace {

long long sample_count(double t0_s, double t1_s, double dt_s) {
  return static_cast<long long>(std::floor((t1_s - t0_s) / dt_s + 1e-9));
}

}  // namespace

double one_way_delay_ms(double slant_range_km) {
  return slant_range_km / kSpeedOfLightKmS * 1000.0;
}

double slant_range_at_elevation_km(const EarthModel& earth, double altitude_km,
                                   double elevation_deg) {
  const double re = earth.radius_km;
  const double ratio = (re + altitude_km) / re;
  const double e = deg_to_rad(elevation_deg);
  const double ce = std::cos(e);
  return re * (std::sqrt(ratio * ratio - ce * ce) - std::sin(e));
}

double bent_pipe_rtt_ms(const EarthModel& earth, double gw_elev_deg, double ue_elev_deg,
                        double altitude_km) {
  detail::require(gw_elev_deg > 0.0 && gw_elev_deg <= 90.0,
                  "gateway elevation must be in (0, 90] deg");
  detail::require(ue_elev_deg > 0.0 && ue_elev_deg <= 90.0, "UE elevation must be in (0, 90] deg");
  const double gw = one_way_delay_ms(slant_range_at_elevation_km(earth, altitude_km, gw_elev_deg));
  const double ue = one_way_delay_ms(slant_range_at_elevation_km(earth, altitude_km, ue_elev_deg));
  return 2.0 * (gw + ue);
}

double differential_delay_ms(const SatelliteState& sat, const Vec3& p0, const Vec3& p1) {
  return (norm(sat.pos_km - p1) - norm(sat.pos_km - p0)) / kSpeedOfLightKmS * 1000.0;
}

double range_rate_km_s(const SatelliteState& sat, const GroundState& gp) {
  const Vec3 los = sat.pos_km - gp.pos_km;
  return dot(los, sat.vel_km_s - gp.vel_km_s) / norm(los);
}

double doppler_shift_hz(const SatelliteState& sat, const GroundState& gp,
                        const CarrierConfig& carrier) {
  return -carrier.f_c_hz / CarrierConfig::c_km_s * range_rate_km_s(sat, gp);
}

double doppler_shift_hz(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                        const CarrierConfig& carrier, double t_s) {
  return doppler_shift_hz(propagate(earth, orbit, t_s), ground_point_state(earth, gp, t_s),
                          carrier);
}

double doppler_rate_hz_s(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                         const CarrierConfig& carrier, double t_s, double step_s) {
  const double ahead = doppler_shift_hz(earth, orbit, gp, carrier, t_s + step_s);
  const double behind = doppler_shift_hz(earth, orbit, gp, carrier, t_s - step_s);
  return (ahead - behind) / (2.0 * step_s);
}

double precompensated_residual_hz(const SatelliteState& sat, const GroundState& ue,
                                  const GroundState& ref, const CarrierConfig& carrier) {
  return doppler_shift_hz(sat, ue, carrier) - doppler_shift_hz(sat, ref, carrier);
}

LinkSample link_sample(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                       const CarrierConfig& carrier, double t_s) {
  const SatelliteState sat = propagate(earth, orbit, t_s);
  const GroundState ground = ground_point_state(earth, gp, t_s);
  const LookAngles look = elevation_and_range(sat, ground.pos_km);

  LinkSample s;
  s.t_s = t_s;
  s.elevation_deg = look.elevation_deg;
  s.slant_range_km = look.slant_range_km;
  s.one_way_delay_ms = one_way_delay_ms(look.slant_range_km);
  s.doppler_hz = doppler_shift_hz(sat, ground, carrier);
  s.doppler_rate_hz_s = doppler_rate_hz_s(earth, orbit, gp, carrier, t_s);
  return s;
}

Trace sample_trace(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                   const CarrierConfig& carrier, double t0_s, double t1_s, double dt_s) {
  detail::require(dt_s > 0.0 && std::isfinite(dt_s), "trace dt_s must be > 0");
  detail::require(t0_s < t1_s, "trace requires t0_s < t1_s");

  Trace trace;
  trace.t0_s = t0_s;
  trace.dt_s = dt_s;
  trace.earth = earth;
  trace.orbit = orbit;
  trace.gp = gp;
  trace.carrier = carrier;

  const long long intervals = sample_count(t0_s, t1_s, dt_s);
  trace.samples.reserve(static_cast<std::size_t>(intervals + 1));
  for (long long k = 0; k <= intervals; ++k) {
    trace.samples.push_back(
        link_sample(earth, orbit, gp, carrier, t0_s + static_cast<double>(k) * dt_s));
  }
  return trace;
}

namespace {

template <typename Fn>
std::vector<OffsetSample> offset_series(const EarthModel& earth, const OrbitConfig& orbit,
                                        const GroundPoint& ref,
                                        const std::vector<OffsetPoint>& points, double t0_s,
                                        double t1_s, double dt_s, Fn value) {
  detail::require(dt_s > 0.0 && std::isfinite(dt_s), "series dt_s must be > 0");
  detail::require(t0_s < t1_s, "series requires t0_s < t1_s");
  std::vector<OffsetSample> out;
  const long long intervals = sample_count(t0_s, t1_s, dt_s);
  out.reserve(static_cast<std::size_t>(intervals + 1) * points.size());
  for (long long k = 0; k <= intervals; ++k) {
    const double t = t0_s + static_cast<double>(k) * dt_s;
    const SatelliteState sat = propagate(earth, orbit, t);
    const GroundState r = ground_point_state(earth, ref, t);
    for (const OffsetPoint& p : points) {
      out.push_back({t, p.offset_km, value(sat, r, ground_point_state(earth, p.gp, t))});
    }
  }
  return out;
}

}  // namespace

std::vector<OffsetSample> differential_delay_series(const EarthModel& earth,
                                                    const OrbitConfig& orbit,
                                                    const GroundPoint& ref,
                                                    const std::vector<OffsetPoint>& points,
                                                    double t0_s, double t1_s, double dt_s) {
  return offset_series(earth, orbit, ref, points, t0_s, t1_s, dt_s,
                       [](const SatelliteState& sat, const GroundState& r, const GroundState& p) {
                         return differential_delay_ms(sat, r.pos_km, p.pos_km) * 1000.0;
                       });
}

std::vector<OffsetSample> residual_doppler_series(const EarthModel& earth,
                                                  const OrbitConfig& orbit,
                                                  const GroundPoint& ref,
                                                  const std::vector<OffsetPoint>& points,
                                                  const CarrierConfig& carrier, double t0_s,
                                                  double t1_s, double dt_s) {
  return offset_series(earth, orbit, ref, points, t0_s, t1_s, dt_s,
                       [&carrier](const SatelliteState& sat, const GroundState& r,
                                  const GroundState& p) {
                         return precompensated_residual_hz(sat, p, r, carrier);
                       });
}

const CsvSchema& trace_csv_schema() {
  static const CsvSchema schema{
      "trace",
      {"t_s", "elev_deg", "range_km", "delay_ms", "doppler_hz", "doppler_rate_hz_s"},
      6};
  return schema;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  CsvWriter w(out, trace_csv_schema());
  for (const LinkSample& s : trace.samples) {
    w.row({s.t_s, s.elevation_deg, s.slant_range_km, s.one_way_delay_ms, s.doppler_hz,
           s.doppler_rate_hz_s});
  }
}

const CsvSchema& differential_delay_csv_schema() {
  static const CsvSchema schema{"differential_delay", {"t_s", "offset_km", "diff_delay_us"}, 6};
  return schema;
}

const CsvSchema& residual_doppler_csv_schema() {
  static const CsvSchema schema{"residual_doppler", {"t_s", "offset_km", "residual_hz"}, 6};
  return schema;
}

void write_offset_series_csv(std::ostream& out, const CsvSchema& schema,
                             const std::vector<OffsetSample>& samples) {
  CsvWriter w(out, schema);
  for (const OffsetSample& s : samples) w.row({s.t_s, s.offset_km, s.value});
}

}  // namespace ntn
