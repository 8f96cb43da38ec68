#pragma once

// RLC acknowledged mode, transmitting and receiving entities.
//
// Each PDU carries one fixed-size payload unit and its own sequence number;
// segment offsets are not modeled. Sequence numbers are unbounded, so window
// stalls do not occur. State variables and timers follow the usual AM rules:
// t-Reassembly starts on a gap, STATUS is sent on its expiry and on poll
// receipt once the polled SN falls below RX_Highest_Status, and
// t-PollRetransmit recovers a lost tail.

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "ntnlab/event_queue.hpp"

namespace ntn {

using Sn = std::uint64_t;

struct RlcAmConfig {
  /// Defaults to the transport block size when absent.
  std::optional<std::int64_t> pdu_payload_bits;
  SimTime t_reassembly_us = 500000;
  SimTime t_status_prohibit_us = 0;
  SimTime t_poll_retransmit_us = 1000000;
  bool poll_on_last_pdu = true;
  int max_rlc_retx = 8;

  void validate() const;

  friend bool operator==(const RlcAmConfig&, const RlcAmConfig&) = default;
};

struct StatusPdu {
  /// Every SN below ack_sn that is not in nack_sns has been received.
  Sn ack_sn = 0;
  std::vector<Sn> nack_sns;
};

struct RlcTxPdu {
  Sn sn = 0;
  bool poll = false;
  bool is_retx = false;
};

class RlcAmTx {
 public:
  struct Callbacks {
    /// The PDU exceeded max_rlc_retx and was given up.
    std::function<void(Sn)> on_discard;
    /// New data (retransmissions) became available for the MAC.
    std::function<void()> on_data_available;
  };

  RlcAmTx(EventQueue& q, const RlcAmConfig& cfg, Callbacks cb);

  /// Appends `count` new PDUs to the transmission buffer; returns the first SN.
  Sn add_pdus(std::size_t count);

  bool has_data() const;
  bool has_new_data() const { return tx_next_ < pdus_.size(); }

  /// Next PDU for the MAC: retransmissions first, then new data.
  std::optional<RlcTxPdu> pull();

  void on_status(const StatusPdu& status);

  std::uint64_t retransmissions() const { return retransmissions_; }
  bool acked(Sn sn) const { return pdus_.at(sn).acked; }

 private:
  struct PduState {
    bool acked = false;
    bool discarded = false;
    bool queued_retx = false;
    int retx_count = 0;
  };

  bool resolved(Sn sn) const { return pdus_[sn].acked || pdus_[sn].discarded; }
  void consider_retx(Sn sn);
  void on_poll_timer();

  RlcAmConfig cfg_;
  Callbacks cb_;
  std::vector<PduState> pdus_;
  std::deque<Sn> retx_queue_;
  Sn tx_next_ = 0;
  Sn tx_next_ack_ = 0;
  std::optional<Sn> poll_sn_;
  bool poll_pending_ = false;
  Timer poll_timer_;
  std::uint64_t retransmissions_ = 0;
};

class RlcAmRx {
 public:
  struct Callbacks {
    /// First arrival of a PDU.
    std::function<void(Sn)> on_pdu_received;
    std::function<void(const StatusPdu&)> send_status;
  };

  RlcAmRx(EventQueue& q, const RlcAmConfig& cfg, Callbacks cb);

  void receive(Sn sn, bool poll);
  /// The transmitter gave up on `sn`; stop waiting for it.
  void abandon(Sn sn);

  Sn rx_next() const { return rx_next_; }
  Sn rx_highest_status() const { return rx_highest_status_; }
  bool reassembly_running() const { return reassembly_.running(); }
  std::uint64_t status_reports() const { return status_reports_; }

 private:
  bool have(Sn sn) const { return sn < have_.size() && have_[sn]; }
  Sn first_missing_from(Sn sn) const;
  void mark(Sn sn);
  void update_reassembly();
  void on_reassembly_expiry();
  void check_pending_poll();
  void trigger_status();
  void send_status_now();

  RlcAmConfig cfg_;
  Callbacks cb_;
  std::vector<char> have_;
  Sn rx_next_ = 0;
  Sn rx_next_highest_ = 0;
  Sn rx_highest_status_ = 0;
  Sn rx_next_status_trigger_ = 0;
  std::optional<Sn> pending_poll_;
  bool status_pending_ = false;
  Timer reassembly_;
  Timer prohibit_;
  std::uint64_t status_reports_ = 0;
};

}  // namespace ntn
