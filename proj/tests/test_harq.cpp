/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "doctest.h"
#include "ofdmasim/common.hpp"
#include "ofdmasim/harq.hpp"
#include "ofdmasim/link_adapt.hpp"

#include <map>

using namespace ofdmasim;

TEST_CASE("combining") {
  CHECK(harq_combine(1.0, 1.0) == doctest::Approx(2.0));
  CHECK(harq_combine(3.7, 0.0) == doctest::Approx(3.7));
  // Order-free over a sequence.
  const double seq[4] = {0.3, 1.9, 0.01, 4.0};
  double fwd = 0.0, rev = 0.0;
  for (int i = 0; i < 4; ++i) fwd = harq_combine(fwd, seq[i]);
  for (int i = 3; i >= 0; --i) rev = harq_combine(rev, seq[i]);
  CHECK(fwd == doctest::Approx(rev).epsilon(1e-15));
}

TEST_CASE("slot management") {
  HarqPool pool;
  CHECK(pool.has_idle());
  const int pid = pool.start_transmission(112, 0, 1, 1.5, 10);
  CHECK(pid == 0);  // first fit
  CHECK(pool.process(0).payload_bits == 112);
  CHECK(pool.process(0).mcs == 0);
  CHECK(pool.process(0).n_prb == 1);
  CHECK(pool.process(0).transmission_count == 1);
  CHECK(pool.process(0).accumulated_sinr == doctest::Approx(1.5));

  for (int i = 1; i < 6; ++i) pool.start_transmission(224, 1, 2, 1.0, 10);
  CHECK(pool.in_flight() == 6);
  CHECK_FALSE(pool.has_idle());
  CHECK_THROWS(pool.start_transmission(112, 0, 1, 1.0, 11));
}

TEST_CASE("feedback transitions") {
  HarqPool pool;
  const int pid = pool.start_transmission(500, 3, 4, 2.0, 0);

  SUBCASE("ack credits once") {
    const auto r = pool.on_feedback(pid, true);
    CHECK(r.delivered);
    CHECK(r.bits == 500);
    CHECK_FALSE(r.dropped);
    CHECK(pool.process(pid).state == HarqState::Idle);
    CHECK_THROWS(pool.on_feedback(pid, true));
  }

  SUBCASE("nack then ack delivers exactly once") {
    auto r = pool.on_feedback(pid, false);
    CHECK_FALSE(r.delivered);
    CHECK_FALSE(r.dropped);
    CHECK(pool.process(pid).state == HarqState::PendingRetx);
    pool.retransmit(pid, 2.0);
    CHECK(pool.process(pid).accumulated_sinr == doctest::Approx(4.0));
    r = pool.on_feedback(pid, true);
    CHECK(r.delivered);
    CHECK(r.bits == 500);
    CHECK(r.transmission_count == 2);
  }

  SUBCASE("four nacks drop the packet") {
    long credited = 0;
    for (int attempt = 1; attempt <= 4; ++attempt) {
      const auto r = pool.on_feedback(pid, false);
      credited += r.bits;
      if (attempt < 4) {
        CHECK(pool.process(pid).state == HarqState::PendingRetx);
        CHECK(pool.process(pid).transmission_count == attempt);
        pool.retransmit(pid, 0.5);
      } else {
        CHECK(r.dropped);
        CHECK(pool.process(pid).state == HarqState::Idle);
      }
    }
    CHECK(credited == 0);
  }
}

TEST_CASE("pending list is fifo in first transmission time") {
  HarqPool pool;
  CHECK(pool.pending_retransmissions().empty());
  const int a = pool.start_transmission(100, 0, 1, 1.0, 5);
  const int b = pool.start_transmission(200, 1, 1, 1.0, 6);
  const int c = pool.start_transmission(300, 2, 1, 1.0, 7);
  // NACK arrival order b, c, a; list must still come back a, b, c.
  pool.on_feedback(b, false);
  pool.on_feedback(c, false);
  pool.on_feedback(a, false);
  const auto pending = pool.pending_retransmissions();
  REQUIRE(pending.size() == 3);
  CHECK(pending[0] == a);
  CHECK(pending[1] == b);
  CHECK(pending[2] == c);
}

TEST_CASE("combined blep never degrades across retransmissions") {
  const McsTable table = default_mcs_table();
  HarqPool pool;
  const int pid = pool.start_transmission(400, 4, 2, db_to_lin(2.0), 0);
  double prev = blep(table[4], lin_to_db(pool.process(pid).accumulated_sinr));
  for (int attempt = 0; attempt < 3; ++attempt) {
    pool.on_feedback(pid, false);
    pool.retransmit(pid, db_to_lin(1.0 + attempt));
    const double cur = blep(table[4], lin_to_db(pool.process(pid).accumulated_sinr));
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("bit conservation under random traffic") {
  HarqPool pool;
  Rng rng(123);
  long credited = 0, acked_payload = 0;
  std::map<int, long> payload_of;
  for (long tti = 0; tti < 20000; ++tti) {
    if (pool.has_idle() && rng.u01() < 0.5) {
      const long payload = 100 + static_cast<long>(rng.below(900));
      const int pid = pool.start_transmission(payload, 0, 1, rng.uniform(0.1, 3.0), tti);
      payload_of[pid] = payload;
    }
    for (int pid = 0; pid < HarqPool::kProcesses; ++pid) {
      const auto& p = pool.process(pid);
      if (p.state == HarqState::AwaitingFeedback && rng.u01() < 0.4) {
        const bool ack = rng.u01() < 0.6;
        const auto r = pool.on_feedback(pid, ack);
        credited += r.bits;
        if (r.delivered) acked_payload += payload_of[pid];
        CHECK(p.transmission_count <= HarqPool::kMaxTransmissions);
      } else if (p.state == HarqState::PendingRetx && rng.u01() < 0.7) {
        pool.retransmit(pid, rng.uniform(0.1, 3.0));
      }
    }
  }
  CHECK(credited == acked_payload);
  CHECK(credited > 0);
}
