#include <doctest.h>

#include <set>
#include <vector>

#include "ntnlab/error.hpp"
#include "ntnlab/rlc_am.hpp"

using namespace ntn;

namespace {

// TX and RX joined by a channel with a fixed delay in each direction. Lost
// PDUs are chosen per (sn, attempt).
struct Link {
  EventQueue q;
  RlcAmConfig cfg;
  SimTime delay = 10;
  SimTime spacing = 1;
  std::set<std::pair<Sn, int>> drop;
  std::vector<Sn> received;
  std::vector<Sn> discarded;
  std::vector<StatusPdu> statuses;
  std::vector<RlcTxPdu> sent;
  std::vector<int> attempts;
  RlcAmTx tx;
  RlcAmRx rx;
  bool pumping = false;

  explicit Link(RlcAmConfig c)
      : cfg(c),
        tx(q, cfg, {[this](Sn sn) { on_discard(sn); }, [this] { pump(); }}),
        rx(q, cfg, {[this](Sn sn) { received.push_back(sn); },
                    [this](const StatusPdu& s) { on_status(s); }}) {}

  void on_discard(Sn sn) {
    discarded.push_back(sn);
    q.schedule_in(delay, [this, sn] { rx.abandon(sn); });
  }

  void on_status(const StatusPdu& s) {
    statuses.push_back(s);
    q.schedule_in(delay, [this, s] { tx.on_status(s); });
  }

  // One PDU per `spacing` while data is queued.
  void pump() {
    if (pumping) return;
    pumping = true;
    q.schedule_in(0, [this] { send_one(); });
  }

  void send_one() {
    const auto pdu = tx.pull();
    if (!pdu) {
      pumping = false;
      return;
    }
    sent.push_back(*pdu);
    if (attempts.size() <= pdu->sn) attempts.resize(pdu->sn + 1, 0);
    const int attempt = attempts[pdu->sn]++;
    if (!drop.count({pdu->sn, attempt})) {
      const RlcTxPdu p = *pdu;
      q.schedule_in(delay, [this, p] { rx.receive(p.sn, p.poll); });
    }
    q.schedule_in(spacing, [this] { send_one(); });
  }

  void offer(std::size_t n) {
    tx.add_pdus(n);
    pump();
  }
};

RlcAmConfig config() {
  RlcAmConfig c;
  c.t_reassembly_us = 50;
  c.t_poll_retransmit_us = 200;
  c.t_status_prohibit_us = 0;
  c.max_rlc_retx = 3;
  return c;
}

}  // namespace

TEST_CASE("lossless in-order transfer") {
  Link l(config());
  l.offer(5);
  l.q.run();
  CHECK(l.received == std::vector<Sn>{0, 1, 2, 3, 4});
  CHECK(l.rx.rx_next() == 5);
  CHECK(l.tx.retransmissions() == 0);
  for (Sn sn = 0; sn < 5; ++sn) CHECK(l.tx.acked(sn));
  // Only the last PDU polls.
  REQUIRE(l.sent.size() == 5);
  for (std::size_t i = 0; i < 4; ++i) CHECK_FALSE(l.sent[i].poll);
  CHECK(l.sent[4].poll);
  REQUIRE(l.statuses.size() == 1);
  CHECK(l.statuses[0].ack_sn == 5);
  CHECK(l.statuses[0].nack_sns.empty());
  CHECK(l.q.empty());
}

TEST_CASE("gap starts reassembly; expiry reports the hole; NACK retransmits") {
  Link l(config());
  l.drop.insert({1, 0});
  l.offer(4);
  // PDU 2 arrives at 12 and opens the gap.
  l.q.run(12);
  CHECK(l.rx.reassembly_running());
  CHECK(l.rx.rx_next() == 1);
  l.q.run();
  CHECK(l.received == std::vector<Sn>{0, 2, 3, 1});
  REQUIRE(!l.statuses.empty());
  // The poll on SN 3 waits for RX_Highest_Status; the reassembly expiry at 62
  // reports the hole.
  CHECK(l.statuses[0].ack_sn == 4);
  CHECK(l.statuses[0].nack_sns == std::vector<Sn>{1});
  CHECK(l.tx.retransmissions() == 1);
  CHECK(l.rx.rx_next() == 4);
  for (Sn sn = 0; sn < 4; ++sn) CHECK(l.tx.acked(sn));
  CHECK(l.discarded.empty());
  CHECK_FALSE(l.rx.reassembly_running());
}

TEST_CASE("reassembly stops when the gap fills before expiry") {
  RlcAmConfig c = config();
  c.t_reassembly_us = 1000;
  Link l(c);
  l.q.schedule_at(0, [&] { l.rx.receive(0, false); });
  l.q.schedule_at(1, [&] { l.rx.receive(2, false); });
  l.q.schedule_at(2, [&] { CHECK(l.rx.reassembly_running()); });
  l.q.schedule_at(3, [&] { l.rx.receive(1, false); });
  l.q.run();
  CHECK_FALSE(l.rx.reassembly_running());
  CHECK(l.rx.rx_next() == 3);
  CHECK(l.rx.status_reports() == 0);
}

TEST_CASE("poll on a received SN below the highest status is answered at once") {
  Link l(config());
  l.q.schedule_at(0, [&] { l.rx.receive(0, false); });
  l.q.schedule_at(1, [&] { l.rx.receive(1, true); });
  l.q.run(1);
  REQUIRE(l.statuses.size() == 1);
  CHECK(l.statuses[0].ack_sn == 2);
}

TEST_CASE("delayed poll waits for the gap to close") {
  RlcAmConfig c = config();
  c.t_reassembly_us = 1000;
  Link l(c);
  l.q.schedule_at(0, [&] { l.rx.receive(0, false); });
  l.q.schedule_at(1, [&] { l.rx.receive(2, true); });
  l.q.schedule_at(5, [&] { CHECK(l.statuses.empty()); });
  l.q.schedule_at(6, [&] { l.rx.receive(1, false); });
  l.q.run(7);
  REQUIRE(l.statuses.size() == 1);
  CHECK(l.statuses[0].ack_sn == 3);
  CHECK(l.statuses[0].nack_sns.empty());
}

TEST_CASE("duplicate with poll is still answered") {
  Link l(config());
  l.q.schedule_at(0, [&] { l.rx.receive(0, false); });
  l.q.schedule_at(1, [&] { l.rx.receive(0, true); });
  l.q.run(1);
  CHECK(l.received == std::vector<Sn>{0});
  CHECK(l.statuses.size() == 1);
}

TEST_CASE("discard after max_rlc_retx and abandon at the receiver") {
  Link l(config());
  for (int a = 0; a < 10; ++a) l.drop.insert({1, a});
  l.offer(3);
  l.q.run();
  CHECK(l.discarded == std::vector<Sn>{1});
  // Initial transmission plus max_rlc_retx retransmissions.
  CHECK(l.attempts[1] == 1 + 3);
  CHECK_FALSE(l.tx.acked(1));
  CHECK(l.tx.acked(0));
  CHECK(l.tx.acked(2));
  CHECK(l.rx.rx_next() == 3);
  CHECK(l.received == std::vector<Sn>{0, 2});
  CHECK_FALSE(l.tx.has_data());
}

TEST_CASE("max_rlc_retx = 0 gives up at the first NACK") {
  RlcAmConfig c = config();
  c.max_rlc_retx = 0;
  Link l(c);
  l.drop.insert({0, 0});
  l.offer(2);
  l.q.run();
  CHECK(l.discarded == std::vector<Sn>{0});
  CHECK(l.tx.retransmissions() == 0);
  CHECK(l.rx.rx_next() == 2);
}

TEST_CASE("poll retransmit recovers a lost tail") {
  Link l(config());
  l.drop.insert({2, 0});
  l.offer(3);
  l.q.run();
  // SN 2 carried the only poll and was lost: nothing reaches the TX until
  // t-PollRetransmit fires and SN 2 is resent with a poll.
  CHECK(l.received == std::vector<Sn>{0, 1, 2});
  REQUIRE(l.sent.size() == 4);
  CHECK(l.sent[3].sn == 2);
  CHECK(l.sent[3].is_retx);
  CHECK(l.sent[3].poll);
  CHECK(l.tx.acked(2));
  CHECK(l.q.now() >= 200);
}

TEST_CASE("poll on last PDU can be disabled") {
  RlcAmConfig c = config();
  c.poll_on_last_pdu = false;
  c.t_poll_retransmit_us = 0;
  Link l(c);
  l.offer(3);
  l.q.run();
  for (const RlcTxPdu& p : l.sent) CHECK_FALSE(p.poll);
  CHECK(l.statuses.empty());
  CHECK(l.received.size() == 3);
}

TEST_CASE("status prohibit defers reports") {
  RlcAmConfig c = config();
  c.t_status_prohibit_us = 100;
  Link l(c);
  l.q.schedule_at(0, [&] { l.rx.receive(0, true); });
  l.q.schedule_at(10, [&] { l.rx.receive(1, true); });
  l.q.schedule_at(20, [&] { l.rx.receive(2, true); });
  l.q.run(99);
  CHECK(l.statuses.size() == 1);
  l.q.run(100);
  REQUIRE(l.statuses.size() == 2);
  CHECK(l.statuses[1].ack_sn == 3);
}

TEST_CASE("abandon advances the window like a reception") {
  Link l(config());
  l.q.schedule_at(0, [&] { l.rx.receive(0, false); });
  l.q.schedule_at(1, [&] { l.rx.receive(2, false); });
  l.q.schedule_at(2, [&] { l.rx.abandon(1); });
  l.q.run(3);
  CHECK(l.rx.rx_next() == 3);
  CHECK(l.received == std::vector<Sn>{0, 2});
  CHECK_FALSE(l.rx.reassembly_running());
  // Late arrival of the abandoned SN is ignored.
  l.q.schedule_at(4, [&] { l.rx.receive(1, false); });
  l.q.run();
  CHECK(l.received == std::vector<Sn>{0, 2});
}

TEST_CASE("config validation") {
  RlcAmConfig c;
  CHECK_NOTHROW(c.validate());
  c.pdu_payload_bits = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RlcAmConfig{};
  c.t_reassembly_us = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RlcAmConfig{};
  c.max_rlc_retx = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
