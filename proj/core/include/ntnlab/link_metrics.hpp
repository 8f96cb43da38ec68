#pragma once

// Per-instant and time-series link characterization: propagation delay,
// bent-pipe round trip, differential delay, Doppler shift and its rate, and
// the residual Doppler left after reference-point pre-compensation.
//
// Doppler sign: positive while the satellite approaches (range decreasing).

#include <optional>
#include <ostream>
#include <vector>

#include "ntnlab/csv.hpp"
#include "ntnlab/geometry.hpp"
#include "ntnlab/units.hpp"

namespace ntn {

struct CarrierConfig {
  double f_c_hz = 2.0e9;
  static constexpr double c_km_s = kSpeedOfLightKmS;

  void validate() const;

  friend bool operator==(const CarrierConfig&, const CarrierConfig&) = default;
};

struct LinkSample {
  double t_s = 0.0;
  double elevation_deg = 0.0;
  double slant_range_km = 0.0;
  double one_way_delay_ms = 0.0;
  double doppler_hz = 0.0;
  double doppler_rate_hz_s = 0.0;
};

struct Trace {
  std::vector<LinkSample> samples;
  double t0_s = 0.0;
  double dt_s = 0.0;
  EarthModel earth;
  OrbitConfig orbit;
  GroundPoint gp;
  CarrierConfig carrier;
  /// Constant feeder-link delay; not folded into per-sample service delays.
  std::optional<double> feeder_delay_ms;
};

/// Central-difference step used for range rate and Doppler rate.
inline constexpr double kDopplerRateStep_s = 1e-3;

double one_way_delay_ms(double slant_range_km);

/// Closed-form slant range from a surface point to a satellite at the given
/// altitude seen at the given elevation.
double slant_range_at_elevation_km(const EarthModel& earth, double altitude_km,
                                   double elevation_deg);

/// Gateway -> satellite -> UE and back, transparent payload. Both elevations
/// must be in (0, 90].
double bent_pipe_rtt_ms(const EarthModel& earth, double gw_elev_deg, double ue_elev_deg,
                        double altitude_km);

/// (|sat - p1| - |sat - p0|) / c, in ms.
double differential_delay_ms(const SatelliteState& sat, const Vec3& p0, const Vec3& p1);

/// Range rate (km/s) of the satellite relative to a moving ground point.
double range_rate_km_s(const SatelliteState& sat, const GroundState& gp);

double doppler_shift_hz(const SatelliteState& sat, const GroundState& gp,
                        const CarrierConfig& carrier);

double doppler_shift_hz(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                        const CarrierConfig& carrier, double t_s);

/// Central finite difference of the Doppler shift with the given step.
double doppler_rate_hz_s(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                         const CarrierConfig& carrier, double t_s,
                         double step_s = kDopplerRateStep_s);

/// Doppler left at the UE when the forward link is pre-compensated so that
/// the reference point sees zero Doppler: f_d(ue) - f_d(ref).
double precompensated_residual_hz(const SatelliteState& sat, const GroundState& ue,
                                  const GroundState& ref, const CarrierConfig& carrier);

LinkSample link_sample(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                       const CarrierConfig& carrier, double t_s);

/// Samples t0 + k*dt for k = 0..n with n = floor((t1 - t0)/dt). Rejects dt <= 0
/// and t0 >= t1 with ConfigError.
Trace sample_trace(const EarthModel& earth, const OrbitConfig& orbit, const GroundPoint& gp,
                   const CarrierConfig& carrier, double t0_s, double t1_s, double dt_s);

/// t_s,elev_deg,range_km,delay_ms,doppler_hz,doppler_rate_hz_s
const CsvSchema& trace_csv_schema();

void write_trace_csv(std::ostream& out, const Trace& trace);

/// A ground point labelled by its offset from the reference point.
struct OffsetPoint {
  double offset_km = 0.0;
  GroundPoint gp;
};

struct OffsetSample {
  double t_s = 0.0;
  double offset_km = 0.0;
  double value = 0.0;
};

/// differential_delay (us) from `ref` to each point, at t0 + k*dt. Rows are
/// time-major, points in the given order.
std::vector<OffsetSample> differential_delay_series(const EarthModel& earth,
                                                    const OrbitConfig& orbit,
                                                    const GroundPoint& ref,
                                                    const std::vector<OffsetPoint>& points,
                                                    double t0_s, double t1_s, double dt_s);
/// precompensated_residual (Hz) of each point against `ref`.
std::vector<OffsetSample> residual_doppler_series(const EarthModel& earth,
                                                  const OrbitConfig& orbit,
                                                  const GroundPoint& ref,
                                                  const std::vector<OffsetPoint>& points,
                                                  const CarrierConfig& carrier, double t0_s,
                                                  double t1_s, double dt_s);

/// t_s,offset_km,diff_delay_us
const CsvSchema& differential_delay_csv_schema();
/// t_s,offset_km,residual_hz
const CsvSchema& residual_doppler_csv_schema();
void write_offset_series_csv(std::ostream& out, const CsvSchema& schema,
                             const std::vector<OffsetSample>& samples);

}  // namespace ntn
