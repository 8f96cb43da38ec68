#pragma once

// Uplink timing advance (GNSS-based full TA, reference-point differential TA),
// PRACH cyclic-prefix budgets, and frequency pre-compensation values.

#include <optional>

#include "ntnlab/geometry.hpp"
#include "ntnlab/link_metrics.hpp"

namespace ntn {

struct PrachConfig {
  double cp_ms = 1.37;
  /// Uniform bound on the timing error left after GNSS-based TA; it eats
  /// into the CP budget.
  double residual_ta_error_ms = 0.0;

  void validate() const;

  friend bool operator==(const PrachConfig&, const PrachConfig&) = default;
};

struct TimingAdvanceResult {
  /// Twice the one-way service-link delay.
  double full_ta_ms = 0.0;
  /// Common feeder-link offset added on top of the service-link TA.
  double feeder_offset_ms = 0.0;
  /// full_ta(ue) - full_ta(ref); present only for reference-point TA.
  std::optional<double> differential_ta_ms;
  std::optional<GroundPoint> reference_point;

  double total_ta_ms() const { return full_ta_ms + feeder_offset_ms; }
};

struct PrachVerdict {
  bool feasible = false;
  double margin_ms = 0.0;
};

struct FrequencyAdjustment {
  /// Offset the gNB applies to the beam's forward link.
  double forward_precomp_hz = 0.0;
  /// Offset the UE applies to its uplink carrier.
  double ue_uplink_adjust_hz = 0.0;
};

/// 2 * slant_range / c.
double full_ta_from_range_ms(double slant_range_km);

/// TA a GNSS-equipped UE derives from its own position and the ephemeris.
/// Throws NoServingLink when the satellite is below the UE's horizon.
TimingAdvanceResult gnss_full_ta(const EarthModel& earth, const OrbitConfig& orbit,
                                 const GroundPoint& ue, double t_s, double feeder_offset_ms = 0.0);

/// TA relative to a reference point whose delay the gNB already absorbs.
/// full_ta_ms is the UE's own full TA; the differential part may be negative.
TimingAdvanceResult reference_point_ta(const EarthModel& earth, const GroundPoint& ue,
                                       const GroundPoint& ref, const SatelliteState& sat);

/// The timing spread fits when spread + residual TA error does not exceed the
/// cyclic prefix.
PrachVerdict prach_feasible(double max_differential_rtt_ms, const PrachConfig& prach);

/// Largest terrestrial-style cell radius whose round-trip spread fits the CP.
double max_cell_radius_km(const PrachConfig& prach);

/// Worst round-trip differential delay between an earth-fixed beam center and
/// its edge. Samples [t0, t1] every dt_s and `edge_points` evenly spaced
/// bearings on the edge circle.
double beam_max_differential_rtt_ms(const EarthModel& earth, const OrbitConfig& orbit,
                                    const GroundPoint& center, double radius_km, double t0_s,
                                    double t1_s, double dt_s = 0.1, int edge_points = 16);

FrequencyAdjustment frequency_adjustments(const EarthModel& earth, const SatelliteState& sat,
                                          const GroundPoint& beam_ref, const GroundPoint& ue,
                                          const CarrierConfig& downlink,
                                          const CarrierConfig& uplink);

/// Downlink Doppler the UE observes once the forward pre-compensation is applied.
double net_downlink_doppler_hz(const EarthModel& earth, const SatelliteState& sat,
                               const GroundPoint& ue, const FrequencyAdjustment& adj,
                               const CarrierConfig& downlink);

}  // namespace ntn
