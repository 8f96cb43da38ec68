#include "ntnlab/access.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ntnlab/error.hpp"

namespace ntn {

void PrachConfig::validate() const {
  detail::require(cp_ms > 0.0, "prach cp_ms must be > 0");
  detail::require(residual_ta_error_ms >= 0.0 && residual_ta_error_ms < cp_ms,
                  "prach residual_ta_error_ms must be in [0, cp_ms)");
}

double full_ta_from_range_ms(double slant_range_km) {
  return 2.0 * one_way_delay_ms(slant_range_km);
}

TimingAdvanceResult gnss_full_ta(const EarthModel& earth, const OrbitConfig& orbit,
                                 const GroundPoint& ue, double t_s, double feeder_offset_ms) {
  const LookAngles look = look_angles(earth, orbit, ue, t_s);
  if (look.elevation_deg < 0.0) {
    throw NoServingLink("satellite below the UE horizon (elevation " +
                        std::to_string(look.elevation_deg) + " deg)");
  }
  TimingAdvanceResult r;
  r.full_ta_ms = full_ta_from_range_ms(look.slant_range_km);
  r.feeder_offset_ms = feeder_offset_ms;
  return r;
}

TimingAdvanceResult reference_point_ta(const EarthModel& earth, const GroundPoint& ue,
                                       const GroundPoint& ref, const SatelliteState& sat) {
  const Vec3 ue_pos = ground_point_position(earth, ue, sat.t_s);
  const Vec3 ref_pos = ground_point_position(earth, ref, sat.t_s);
  TimingAdvanceResult r;
  r.full_ta_ms = full_ta_from_range_ms(norm(sat.pos_km - ue_pos));
  r.differential_ta_ms = 2.0 * differential_delay_ms(sat, ref_pos, ue_pos);
  r.reference_point = ref;
  return r;
}

PrachVerdict prach_feasible(double max_differential_rtt_ms, const PrachConfig& prach) {
  detail::require(max_differential_rtt_ms >= 0.0, "max differential RTT must be >= 0");
  const double margin = prach.cp_ms - prach.residual_ta_error_ms - max_differential_rtt_ms;
  return {margin >= 0.0, margin};
}

double max_cell_radius_km(const PrachConfig& prach) {
  return kSpeedOfLightKmS * (prach.cp_ms - prach.residual_ta_error_ms) / 1000.0 / 2.0;
}

double beam_max_differential_rtt_ms(const EarthModel& earth, const OrbitConfig& orbit,
                                    const GroundPoint& center, double radius_km, double t0_s,
                                    double t1_s, double dt_s, int edge_points) {
  detail::require(radius_km >= 0.0, "beam radius must be >= 0");
  detail::require(dt_s > 0.0 && edge_points > 0, "sampling parameters must be positive");
  if (radius_km == 0.0) return 0.0;

  std::vector<GroundPoint> edge;
  edge.reserve(static_cast<std::size_t>(edge_points));
  for (int k = 0; k < edge_points; ++k) {
    edge.push_back(destination_point(earth, center, 360.0 * k / edge_points, radius_km));
  }

  double worst = 0.0;
  for (double t : sample_grid(t0_s, t1_s, dt_s)) {
    const SatelliteState sat = propagate(earth, orbit, t);
    const Vec3 c = ground_point_position(earth, center, t);
    for (const GroundPoint& e : edge) {
      const double d = differential_delay_ms(sat, c, ground_point_position(earth, e, t));
      worst = std::max(worst, 2.0 * std::abs(d));
    }
  }
  return worst;
}

FrequencyAdjustment frequency_adjustments(const EarthModel& earth, const SatelliteState& sat,
                                          const GroundPoint& beam_ref, const GroundPoint& ue,
                                          const CarrierConfig& downlink,
                                          const CarrierConfig& uplink) {
  const GroundState ref_state = ground_point_state(earth, beam_ref, sat.t_s);
  const GroundState ue_state = ground_point_state(earth, ue, sat.t_s);
  return {-doppler_shift_hz(sat, ref_state, downlink), -doppler_shift_hz(sat, ue_state, uplink)};
}

double net_downlink_doppler_hz(const EarthModel& earth, const SatelliteState& sat,
                               const GroundPoint& ue, const FrequencyAdjustment& adj,
                               const CarrierConfig& downlink) {
  return doppler_shift_hz(sat, ground_point_state(earth, ue, sat.t_s), downlink) +
         adj.forward_precomp_hz;
}

}  // namespace ntn
