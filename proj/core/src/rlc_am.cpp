#include "ntnlab/rlc_am.hpp"

#include <algorithm>

#include "ntnlab/error.hpp"

namespace ntn {

void RlcAmConfig::validate() const {
  detail::require(!pdu_payload_bits || *pdu_payload_bits > 0, "rlc pdu_payload_bits must be > 0");
  detail::require(t_reassembly_us >= 0 && t_status_prohibit_us >= 0 && t_poll_retransmit_us >= 0,
                  "rlc timers must be >= 0");
  detail::require(max_rlc_retx >= 0, "rlc max_rlc_retx must be >= 0");
}

// ---------------------------------------------------------------------------
// Transmitting side

RlcAmTx::RlcAmTx(EventQueue& q, const RlcAmConfig& cfg, Callbacks cb)
    : cfg_(cfg), cb_(std::move(cb)), poll_timer_(q) {}

Sn RlcAmTx::add_pdus(std::size_t count) {
  const Sn first = pdus_.size();
  pdus_.resize(pdus_.size() + count);
  return first;
}

bool RlcAmTx::has_data() const {
  if (has_new_data()) return true;
  return std::any_of(retx_queue_.begin(), retx_queue_.end(),
                     [this](Sn sn) { return !resolved(sn); });
}

std::optional<RlcTxPdu> RlcAmTx::pull() {
  std::optional<RlcTxPdu> out;
  while (!retx_queue_.empty() && !out) {
    const Sn sn = retx_queue_.front();
    retx_queue_.pop_front();
    pdus_[sn].queued_retx = false;
    if (resolved(sn)) continue;
    out = RlcTxPdu{sn, false, true};
    ++retransmissions_;
  }
  if (!out) {
    if (!has_new_data()) return std::nullopt;
    out = RlcTxPdu{tx_next_++, false, false};
  }

  if (poll_pending_ || (cfg_.poll_on_last_pdu && !has_data())) {
    out->poll = true;
    poll_pending_ = false;
    poll_sn_ = tx_next_ - 1;
    poll_timer_.start(cfg_.t_poll_retransmit_us, [this] { on_poll_timer(); });
  }
  return out;
}

void RlcAmTx::consider_retx(Sn sn) {
  PduState& p = pdus_[sn];
  if (resolved(sn) || p.queued_retx) return;
  if (++p.retx_count > cfg_.max_rlc_retx) {
    p.discarded = true;
    if (cb_.on_discard) cb_.on_discard(sn);
    return;
  }
  p.queued_retx = true;
  retx_queue_.push_back(sn);
}

void RlcAmTx::on_status(const StatusPdu& status) {
  const Sn limit = std::min(status.ack_sn, tx_next_);
  for (Sn sn = tx_next_ack_; sn < limit; ++sn) {
    if (std::binary_search(status.nack_sns.begin(), status.nack_sns.end(), sn)) {
      consider_retx(sn);
    } else if (!pdus_[sn].discarded) {
      pdus_[sn].acked = true;
    }
  }
  while (tx_next_ack_ < tx_next_ && resolved(tx_next_ack_)) ++tx_next_ack_;

  if (poll_sn_ && *poll_sn_ < status.ack_sn) {
    poll_timer_.stop();
    poll_sn_.reset();
  }
  if (has_data() && cb_.on_data_available) cb_.on_data_available();
}

void RlcAmTx::on_poll_timer() {
  poll_pending_ = true;
  if (!has_data() && tx_next_ > tx_next_ack_) {
    Sn candidate = tx_next_ - 1;
    if (resolved(candidate)) {
      candidate = tx_next_ack_;
      while (candidate < tx_next_ && resolved(candidate)) ++candidate;
    }
    if (candidate < tx_next_) consider_retx(candidate);
  }
  if (has_data() && cb_.on_data_available) cb_.on_data_available();
}

// ---------------------------------------------------------------------------
// Receiving side

RlcAmRx::RlcAmRx(EventQueue& q, const RlcAmConfig& cfg, Callbacks cb)
    : cfg_(cfg), cb_(std::move(cb)), reassembly_(q), prohibit_(q) {}

Sn RlcAmRx::first_missing_from(Sn sn) const {
  while (have(sn)) ++sn;
  return sn;
}

void RlcAmRx::mark(Sn sn) {
  if (sn >= have_.size()) have_.resize(sn + 1, 0);
  have_[sn] = 1;
  if (sn >= rx_next_highest_) rx_next_highest_ = sn + 1;
  if (sn == rx_highest_status_) rx_highest_status_ = first_missing_from(sn);
  if (sn == rx_next_) rx_next_ = first_missing_from(sn);
  rx_highest_status_ = std::max(rx_highest_status_, rx_next_);
}

void RlcAmRx::receive(Sn sn, bool poll) {
  if (sn < rx_next_ || have(sn)) {
    // Duplicate; a poll on it is still answered.
    if (poll) trigger_status();
    return;
  }
  mark(sn);
  if (cb_.on_pdu_received) cb_.on_pdu_received(sn);
  update_reassembly();

  if (poll) {
    if (sn < rx_highest_status_) {
      trigger_status();
    } else {
      pending_poll_ = std::max(pending_poll_.value_or(0), sn);
    }
  }
  check_pending_poll();
}

void RlcAmRx::abandon(Sn sn) {
  if (sn < rx_next_ || have(sn)) return;
  mark(sn);
  update_reassembly();
  check_pending_poll();
}

void RlcAmRx::update_reassembly() {
  if (reassembly_.running() && rx_next_status_trigger_ <= rx_next_) reassembly_.stop();
  if (!reassembly_.running() && rx_next_highest_ > rx_next_ + 1) {
    rx_next_status_trigger_ = rx_next_highest_;
    reassembly_.start(cfg_.t_reassembly_us, [this] { on_reassembly_expiry(); });
  }
}

void RlcAmRx::on_reassembly_expiry() {
  rx_highest_status_ = std::max(rx_highest_status_, first_missing_from(rx_next_status_trigger_));
  if (rx_next_highest_ > rx_highest_status_ + 1) {
    rx_next_status_trigger_ = rx_next_highest_;
    reassembly_.start(cfg_.t_reassembly_us, [this] { on_reassembly_expiry(); });
  }
  // This report also answers any poll the new RX_Highest_Status satisfies.
  if (pending_poll_ && *pending_poll_ < rx_highest_status_) pending_poll_.reset();
  trigger_status();
}

void RlcAmRx::check_pending_poll() {
  if (pending_poll_ && *pending_poll_ < rx_highest_status_) {
    pending_poll_.reset();
    trigger_status();
  }
}

void RlcAmRx::trigger_status() {
  if (prohibit_.running()) {
    status_pending_ = true;
    return;
  }
  send_status_now();
}

void RlcAmRx::send_status_now() {
  StatusPdu st;
  st.ack_sn = rx_highest_status_;
  for (Sn sn = rx_next_; sn < rx_highest_status_; ++sn) {
    if (!have(sn)) st.nack_sns.push_back(sn);
  }
  status_pending_ = false;
  ++status_reports_;
  if (cfg_.t_status_prohibit_us > 0) {
    prohibit_.start(cfg_.t_status_prohibit_us, [this] {
      if (status_pending_) send_status_now();
    });
  }
  if (cb_.send_status) cb_.send_status(st);
}

}  // namespace ntn
