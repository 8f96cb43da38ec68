#include "ntnlab/stack_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ntnlab/error.hpp"
#include "ntnlab/random.hpp"

namespace ntn {

void LinkModel::validate() const {
  detail::require(one_way_delay_us >= 0, "link one_way_delay_us must be >= 0");
  detail::require(tti_us > 0, "link tti_us must be > 0");
  detail::require(tb_size_bits > 0, "link tb_size_bits must be > 0");
  detail::require(bler >= 0.0 && bler <= 1.0, "link bler must be in [0, 1]");
  detail::require(feedback_error_prob >= 0.0 && feedback_error_prob <= 1.0,
                  "link feedback_error_prob must be in [0, 1]");
}

void HarqConfig::validate() const {
  detail::require(num_processes >= 1, "harq num_processes must be >= 1");
  detail::require(max_transmissions >= 1, "harq max_transmissions must be >= 1");
  detail::require(node_processing_us >= 0, "harq node_processing_us must be >= 0");
}

void TrafficConfig::validate() const {
  detail::require(packet_size_bytes > 0, "traffic packet_size_bytes must be > 0");
  detail::require(period_us > 0, "traffic period_us must be > 0");
  detail::require(num_packets > 0, "traffic num_packets must be > 0");
}

void StackScenario::validate() const {
  link.validate();
  harq.validate();
  rlc.validate();
  traffic.validate();
  detail::require(pdu_payload_bits() <= link.tb_size_bits,
                  "rlc pdu_payload_bits must not exceed link tb_size_bits");
}

namespace {

constexpr std::uint64_t kPhyStream = 1;
constexpr std::uint64_t kFeedbackStream = 2;

enum class PduFate : std::uint8_t { pending, delivered, discarded };

class StackSimulator {
 public:
  StackSimulator(const StackScenario& sc, bool full_buffer)
      : sc_(sc),
        full_buffer_(full_buffer),
        phy_rng_(sc.traffic.rng_seed, kPhyStream),
        fb_rng_(sc.traffic.rng_seed, kFeedbackStream),
        tx_(q_, sc.rlc,
            {[this](Sn sn) { on_rlc_discard(sn); }, [this] { request_tick(); }}),
        rx_(q_, sc.rlc,
            {[this](Sn sn) { on_rlc_pdu_received(sn); },
             [this](const StatusPdu& st) { on_status_sent(st); }}) {
    if (sc_.harq.enabled) procs_.resize(static_cast<std::size_t>(sc_.harq.num_processes));
    report_.seed = sc.traffic.rng_seed;
    report_.rng_algorithm = std::string(kRngAlgorithm);
  }
  StackSimulator(const StackSimulator&) = delete;
  StackSimulator& operator=(const StackSimulator&) = delete;

  void start_periodic_traffic() {
    q_.schedule_at(0, [this] { on_packet(0); });
  }

  // The source refills the RLC buffer on every pull.
  void start_full_buffer() {
    q_.schedule_at(0, [this] { request_tick(); });
  }

  void set_window(SimTime lo, SimTime hi) {
    window_lo_ = lo;
    window_hi_ = hi;
  }

  void run(SimTime horizon) { q_.run(horizon); }

  std::uint64_t window_rx_pdus() const { return window_rx_; }
  std::uint64_t window_ttis() const { return window_ttis_; }

  SimReport finish() {
    report_.end_time_us = q_.now();
    report_.rlc.generated = pdu_fate_.size();
    report_.rlc.in_flight = static_cast<std::uint64_t>(
        std::count(pdu_fate_.begin(), pdu_fate_.end(), PduFate::pending));
    report_.pdcp.generated = sdus_.size();
    report_.pdcp.in_flight = sdus_.size() - pdcp_next_;
    report_.rlc_retransmissions = tx_.retransmissions();
    report_.status_reports = rx_.status_reports();

    if (first_tick_ && last_tick_) {
      const double span = static_cast<double>((*last_tick_ - *first_tick_) / sc_.link.tti_us + 1);
      report_.harq_utilization = static_cast<double>(used_ttis_) / span;
    }
    const double offered_s = static_cast<double>(sc_.traffic.num_packets) *
                             static_cast<double>(sc_.traffic.period_us) * 1e-6;
    report_.throughput_bits_per_s = static_cast<double>(report_.pdcp.delivered) *
                                    static_cast<double>(sc_.traffic.packet_size_bytes) * 8.0 /
                                    offered_s;
    return std::move(report_);
  }

 private:
  struct Sdu {
    SimTime arrival = 0;
    std::uint32_t num_pdus = 0;
    std::uint32_t received = 0;
    bool lost = false;
  };

  struct HarqProcess {
    enum class State { idle, awaiting_feedback, pending_retx };
    State state = State::idle;
    RlcTxPdu pdu;
    int attempts = 0;
    SimTime ready_at = 0;
  };

  void add_sdu(SimTime arrival, std::uint32_t num_pdus) {
    const auto index = static_cast<std::uint32_t>(sdus_.size());
    sdus_.push_back({arrival, num_pdus, 0, false});
    tx_.add_pdus(num_pdus);
    pdu_sdu_.insert(pdu_sdu_.end(), num_pdus, index);
    pdu_fate_.insert(pdu_fate_.end(), num_pdus, PduFate::pending);
  }

  void on_packet(std::int64_t k) {
    const std::int64_t bits = sc_.traffic.packet_size_bytes * 8;
    const std::int64_t payload = sc_.pdu_payload_bits();
    add_sdu(q_.now(), static_cast<std::uint32_t>((bits + payload - 1) / payload));
    request_tick();
    if (k + 1 < sc_.traffic.num_packets) {
      q_.schedule_at((k + 1) * sc_.traffic.period_us, [this, k] { on_packet(k + 1); });
    }
  }

  void request_tick() {
    const SimTime tti = sc_.link.tti_us;
    SimTime at = (q_.now() + tti - 1) / tti * tti;
    if (last_tick_) at = std::max(at, *last_tick_ + tti);
    if (next_tick_ && *next_tick_ <= at) return;
    next_tick_ = at;
    q_.schedule_at(at, [this] { on_tick(); });
  }

  std::optional<RlcTxPdu> pull() {
    if (full_buffer_ && !tx_.has_data()) add_sdu(q_.now(), 1);
    return tx_.pull();
  }

  void on_tick() {
    if (!next_tick_ || *next_tick_ != q_.now()) return;
    next_tick_.reset();
    last_tick_ = q_.now();

    bool sent = false;
    if (sc_.harq.enabled) {
      HarqProcess* retx = nullptr;
      for (auto& p : procs_) {
        if (p.state == HarqProcess::State::pending_retx && (!retx || p.ready_at < retx->ready_at)) {
          retx = &p;
        }
      }
      if (retx) {
        transmit(retx->pdu, ++retx->attempts, retx);
        sent = true;
      } else {
        auto idle = std::find_if(procs_.begin(), procs_.end(), [](const HarqProcess& p) {
          return p.state == HarqProcess::State::idle;
        });
        if (idle != procs_.end()) {
          if (auto pdu = pull()) {
            idle->pdu = *pdu;
            idle->attempts = 1;
            transmit(idle->pdu, 1, &*idle);
            sent = true;
          }
        }
      }
    } else if (auto pdu = pull()) {
      transmit(*pdu, 1, nullptr);
      sent = true;
    }

    if (sent) {
      if (!first_tick_) first_tick_ = q_.now();
      ++used_ttis_;
      if (q_.now() >= window_lo_ && q_.now() < window_hi_) ++window_ttis_;
      request_tick();
    }
  }

  void transmit(const RlcTxPdu& pdu, int attempt, HarqProcess* proc) {
    auto& by_attempt = report_.harq_tx_by_attempt;
    if (by_attempt.size() < static_cast<std::size_t>(attempt)) by_attempt.resize(attempt, 0);
    ++by_attempt[attempt - 1];

    const bool decoded = !phy_rng_.bernoulli(sc_.link.bler);
    const bool feedback_flipped = fb_rng_.bernoulli(sc_.link.feedback_error_prob);
    const SimTime tx_end = q_.now() + sc_.link.tti_us;

    if (decoded) {
      q_.schedule_at(tx_end + sc_.link.one_way_delay_us,
                     [this, pdu, attempt] { on_arrival(pdu, attempt); });
    }
    if (proc) {
      proc->state = HarqProcess::State::awaiting_feedback;
      const bool ack = decoded != feedback_flipped;
      q_.schedule_at(tx_end + 2 * sc_.link.one_way_delay_us + sc_.harq.node_processing_us,
                     [this, proc, ack] { on_feedback(*proc, ack); });
    }
  }

  void on_arrival(const RlcTxPdu& pdu, int attempt) {
    arriving_attempt_ = attempt;
    arriving_retx_ = pdu.is_retx;
    rx_.receive(pdu.sn, pdu.poll);
  }

  void on_feedback(HarqProcess& proc, bool ack) {
    if (ack || proc.attempts >= sc_.harq.max_transmissions) {
      proc.state = HarqProcess::State::idle;
    } else {
      proc.state = HarqProcess::State::pending_retx;
      proc.ready_at = q_.now();
    }
    request_tick();
  }

  void on_rlc_pdu_received(Sn sn) {
    if (pdu_fate_[sn] != PduFate::pending) return;
    pdu_fate_[sn] = PduFate::delivered;
    ++report_.rlc.delivered;

    Sdu& sdu = sdus_[pdu_sdu_[sn]];
    const std::int64_t delay = q_.now() - sdu.arrival;
    report_.rlc_pdu_delays_us.push_back(delay);
    report_.rlc_deliveries.push_back({sn, delay, arriving_attempt_, arriving_retx_});
    if (q_.now() >= window_lo_ && q_.now() < window_hi_) ++window_rx_;

    if (++sdu.received == sdu.num_pdus) pdcp_try_deliver();
  }

  void on_rlc_discard(Sn sn) {
    if (pdu_fate_[sn] != PduFate::pending) return;
    pdu_fate_[sn] = PduFate::discarded;
    ++report_.rlc.discarded;
    sdus_[pdu_sdu_[sn]].lost = true;
    q_.schedule_in(sc_.link.one_way_delay_us, [this, sn] { rx_.abandon(sn); });
    pdcp_try_deliver();
  }

  void on_status_sent(const StatusPdu& st) {
    q_.schedule_in(sc_.link.one_way_delay_us, [this, st] { tx_.on_status(st); });
  }

  void pdcp_try_deliver() {
    while (pdcp_next_ < sdus_.size()) {
      const Sdu& s = sdus_[pdcp_next_];
      if (s.lost) {
        ++report_.pdcp.discarded;
      } else if (s.received == s.num_pdus) {
        ++report_.pdcp.delivered;
        report_.pdcp_sdu_delays_us.push_back(q_.now() - s.arrival);
      } else {
        break;
      }
      ++pdcp_next_;
    }
  }

  StackScenario sc_;
  bool full_buffer_;
  EventQueue q_;
  RandomStream phy_rng_;
  RandomStream fb_rng_;
  RlcAmTx tx_;
  RlcAmRx rx_;
  std::vector<HarqProcess> procs_;

  std::vector<Sdu> sdus_;
  std::vector<std::uint32_t> pdu_sdu_;
  std::vector<PduFate> pdu_fate_;
  std::size_t pdcp_next_ = 0;

  std::optional<SimTime> next_tick_;
  std::optional<SimTime> last_tick_;
  std::optional<SimTime> first_tick_;
  std::uint64_t used_ttis_ = 0;

  int arriving_attempt_ = 1;
  bool arriving_retx_ = false;

  SimTime window_lo_ = 0;
  SimTime window_hi_ = kForever;
  std::uint64_t window_rx_ = 0;
  std::uint64_t window_ttis_ = 0;

  SimReport report_;
};

}  // namespace

SimReport run_scenario(const StackScenario& scenario) {
  scenario.validate();
  StackSimulator sim(scenario, false);
  sim.start_periodic_traffic();
  sim.run(kForever);
  return sim.finish();
}

SimReport run_scenario(const LinkModel& link, const HarqConfig& harq, const RlcAmConfig& rlc,
                       const TrafficConfig& traffic) {
  return run_scenario(StackScenario{link, harq, rlc, traffic});
}

double harq_utilization_bound(const HarqConfig& harq, const LinkModel& link) {
  if (!harq.enabled) return 1.0;
  const double rtt = static_cast<double>(2 * link.one_way_delay_us + link.tti_us +
                                         harq.node_processing_us);
  return std::min(1.0, harq.num_processes * static_cast<double>(link.tti_us) / rtt);
}

SaturationResult saturation_throughput(const LinkModel& link, const HarqConfig& harq,
                                       const RlcAmConfig& rlc, std::uint64_t seed,
                                       SimTime window_us) {
  StackScenario sc{link, harq, rlc, TrafficConfig{}};
  sc.traffic.rng_seed = seed;
  sc.validate();

  const SimTime harq_rtt = 2 * link.one_way_delay_us + link.tti_us + harq.node_processing_us;
  if (window_us <= 0) window_us = 200 * harq_rtt;
  const SimTime warmup = harq_rtt + link.tti_us;

  StackSimulator sim(sc, true);
  sim.set_window(warmup, warmup + window_us);
  sim.start_full_buffer();
  sim.run(warmup + window_us - 1);

  SaturationResult r;
  r.window_us = window_us;
  const double seconds = static_cast<double>(window_us) * 1e-6;
  r.goodput_bits_per_s = static_cast<double>(sim.window_rx_pdus()) *
                         static_cast<double>(sc.pdu_payload_bits()) / seconds;
  r.harq_utilization = static_cast<double>(sim.window_ttis()) /
                       (static_cast<double>(window_us) / static_cast<double>(link.tti_us));
  return r;
}

std::int64_t nearest_rank(std::span<const std::int64_t> sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

DelayStats delay_statistics(std::span<const std::int64_t> samples, std::int64_t bin_width_us) {
  detail::require(bin_width_us > 0, "histogram bin width must be > 0");
  DelayStats stats;
  stats.count = samples.size();
  if (samples.empty()) return stats;

  std::vector<std::int64_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const auto bin_of = [bin_width_us](std::int64_t v) {
    std::int64_t b = v / bin_width_us;
    if (v % bin_width_us != 0 && v < 0) --b;
    return b;
  };
  const std::int64_t first = bin_of(sorted.front());
  const std::int64_t last = bin_of(sorted.back());
  stats.histogram.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t b = first; b <= last; ++b) {
    stats.histogram.push_back({b * bin_width_us, (b + 1) * bin_width_us, 0});
  }
  for (std::int64_t v : sorted) ++stats.histogram[static_cast<std::size_t>(bin_of(v) - first)].count;

  stats.p50 = nearest_rank(sorted, 0.50);
  stats.p95 = nearest_rank(sorted, 0.95);
  stats.p99 = nearest_rank(sorted, 0.99);
  stats.max = sorted.back();
  return stats;
}

double fraction_in_range(std::span<const std::int64_t> samples, std::int64_t lo_us,
                         std::int64_t hi_us) {
  if (samples.empty()) return 0.0;
  const auto n = std::count_if(samples.begin(), samples.end(),
                               [=](std::int64_t v) { return v >= lo_us && v <= hi_us; });
  return static_cast<double>(n) / static_cast<double>(samples.size());
}

const CsvSchema& delay_csv_schema() {
  static const CsvSchema schema{"delays", {"sample_idx", "delay_us"}, 6};
  return schema;
}

const CsvSchema& histogram_csv_schema() {
  static const CsvSchema schema{"histogram", {"bin_lo_us", "bin_hi_us", "count"}, 6};
  return schema;
}

void write_delay_csv(std::ostream& out, std::span<const std::int64_t> samples) {
  CsvWriter w(out, delay_csv_schema());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    w.row({static_cast<std::int64_t>(i), samples[i]});
  }
}

void write_histogram_csv(std::ostream& out, const DelayStats& stats) {
  CsvWriter w(out, histogram_csv_schema());
  for (const HistogramBin& b : stats.histogram) {
    w.row({b.lo_us, b.hi_us, static_cast<std::int64_t>(b.count)});
  }
}

}  // namespace ntn
