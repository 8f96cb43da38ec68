#pragma once

// Deterministic discrete-event simulation of one downlink bearer over a
// long-delay link:
//
//   PDCP TX -> RLC AM TX -> MAC/HARQ (N stop-and-wait processes) -> PHY
//   PHY (Bernoulli TB errors, one-way delay) -> RLC AM RX -> PDCP RX (in order)
//
// Timing rules (integer microseconds):
//  - one transport block per TTI, starting on a TTI boundary; a TB sent at t
//    is decoded at t + tti + one_way;
//  - HARQ feedback for that TB reaches the transmitter at
//    t + tti + 2*one_way + node_processing, and the process is blocked until
//    then; HARQ retransmissions are scheduled before new data;
//  - with HARQ disabled each PDU gets one PHY attempt and no process limit;
//  - RLC STATUS reports reach the transmitter one_way after being sent and are
//    never lost.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ntnlab/csv.hpp"
#include "ntnlab/event_queue.hpp"
#include "ntnlab/rlc_am.hpp"

namespace ntn {

struct LinkModel {
  SimTime one_way_delay_us = 256000;
  SimTime tti_us = 1000;
  std::int64_t tb_size_bits = 1000;
  /// Independent error probability of every transmission attempt.
  double bler = 0.1;
  /// Probability that an ACK is read as NACK or vice versa.
  double feedback_error_prob = 0.0;

  void validate() const;

  friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

struct HarqConfig {
  bool enabled = true;
  int num_processes = 16;
  int max_transmissions = 4;
  SimTime node_processing_us = 0;

  void validate() const;

  friend bool operator==(const HarqConfig&, const HarqConfig&) = default;
};

struct TrafficConfig {
  std::int64_t packet_size_bytes = 1000;
  SimTime period_us = 1000000;
  std::int64_t num_packets = 10000;
  std::uint64_t rng_seed = 1;

  void validate() const;

  friend bool operator==(const TrafficConfig&, const TrafficConfig&) = default;
};

struct StackScenario {
  LinkModel link;
  HarqConfig harq;
  RlcAmConfig rlc;
  TrafficConfig traffic;

  /// Validates every part and the cross-constraints (payload <= TB size).
  void validate() const;
  std::int64_t pdu_payload_bits() const { return rlc.pdu_payload_bits.value_or(link.tb_size_bits); }

  friend bool operator==(const StackScenario&, const StackScenario&) = default;
};

/// generated == delivered + discarded + in_flight at the end of every run.
struct LayerCounts {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t discarded = 0;
  std::uint64_t in_flight = 0;

  bool conserved() const { return generated == delivered + discarded + in_flight; }
};

/// First arrival of one RLC PDU at the receiver.
struct PduDelivery {
  Sn sn = 0;
  std::int64_t delay_us = 0;
  /// HARQ attempt number (1-based) of the copy that arrived.
  int harq_attempt = 1;
  /// Whether that copy was an RLC retransmission.
  bool arq_recovered = false;
};

struct SimReport {
  /// Per received PDU, in first-arrival order: arrival minus SDU arrival at TX.
  std::vector<std::int64_t> rlc_pdu_delays_us;
  std::vector<PduDelivery> rlc_deliveries;
  /// Per delivered SDU, in delivery order: in-order delivery minus arrival at TX.
  std::vector<std::int64_t> pdcp_sdu_delays_us;

  LayerCounts rlc;
  LayerCounts pdcp;
  /// Index k counts HARQ transmissions that were attempt k+1.
  std::vector<std::uint64_t> harq_tx_by_attempt;
  std::uint64_t rlc_retransmissions = 0;
  std::uint64_t status_reports = 0;

  double throughput_bits_per_s = 0.0;
  /// Fraction of TTIs carrying a transport block between the first and last.
  double harq_utilization = 0.0;
  SimTime end_time_us = 0;

  std::uint64_t seed = 0;
  std::string rng_algorithm;
};

struct SaturationResult {
  double goodput_bits_per_s = 0.0;
  double harq_utilization = 0.0;
  SimTime window_us = 0;
};

struct HistogramBin {
  std::int64_t lo_us = 0;
  std::int64_t hi_us = 0;
  std::uint64_t count = 0;
};

struct DelayStats {
  /// Contiguous bins [lo, hi) of the given width covering min..max.
  std::vector<HistogramBin> histogram;
  std::size_t count = 0;
  std::optional<std::int64_t> p50, p95, p99, max;
};

/// Runs the periodic-traffic scenario to completion (all events drained).
/// Throws ConfigError for invalid configuration.
SimReport run_scenario(const LinkModel& link, const HarqConfig& harq, const RlcAmConfig& rlc,
                       const TrafficConfig& traffic);
SimReport run_scenario(const StackScenario& scenario);

/// Share of TTIs a stop-and-wait HARQ entity can fill:
/// min(1, N * tti / (2*one_way + tti + processing)). 1 when HARQ is off.
double harq_utilization_bound(const HarqConfig& harq, const LinkModel& link);

/// Full-buffer goodput measured after one HARQ round trip of warm-up, over
/// `window_us` (0 picks 200 HARQ round trips).
SaturationResult saturation_throughput(const LinkModel& link, const HarqConfig& harq,
                                       const RlcAmConfig& rlc, std::uint64_t seed = 1,
                                       SimTime window_us = 0);

/// Histogram plus nearest-rank quantiles. Empty input gives an empty
/// histogram and absent quantiles.
DelayStats delay_statistics(std::span<const std::int64_t> samples, std::int64_t bin_width_us);

/// Nearest-rank quantile, q in (0, 1].
std::int64_t nearest_rank(std::span<const std::int64_t> sorted, double q);

/// Fraction of samples in the closed range [lo_us, hi_us].
double fraction_in_range(std::span<const std::int64_t> samples, std::int64_t lo_us,
                         std::int64_t hi_us);

/// sample_idx,delay_us
const CsvSchema& delay_csv_schema();
/// bin_lo_us,bin_hi_us,count
const CsvSchema& histogram_csv_schema();

void write_delay_csv(std::ostream& out, std::span<const std::int64_t> samples);
void write_histogram_csv(std::ostream& out, const DelayStats& stats);

}  // namespace ntn
