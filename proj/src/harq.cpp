/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/harq.hpp"

#include <algorithm>
#include <stdexcept>

namespace ofdmasim {

bool HarqPool::has_idle() const {
  for (const HarqProcess& p : slots_) {
    if (p.state == HarqState::Idle) return true;
  }
  return false;
}

int HarqPool::in_flight() const {
  int n = 0;
  for (const HarqProcess& p : slots_) {
    if (p.state != HarqState::Idle) ++n;
  }
  return n;
}

int HarqPool::start_transmission(long payload_bits, int mcs, int n_prb,
                                 double eff_sinr, long tti) {
  for (int i = 0; i < kProcesses; ++i) {
    HarqProcess& p = slots_[i];
    if (p.state != HarqState::Idle) continue;
    p.state = HarqState::AwaitingFeedback;
    p.transmission_count = 1;
    p.accumulated_sinr = eff_sinr;
    p.payload_bits = payload_bits;
    p.mcs = mcs;
    p.n_prb = n_prb;
    p.first_tx_tti = tti;
    return i;
  }
  throw std::runtime_error("HarqPool: no idle process (scheduler over-committed)");
}

void HarqPool::retransmit(int pid, double eff_sinr) {
  HarqProcess& p = slots_.at(pid);
  if (p.state != HarqState::PendingRetx) {
    throw std::logic_error("HarqPool: retransmit on a process that is not pending");
  }
  if (p.transmission_count >= kMaxTransmissions) {
    throw std::logic_error("HarqPool: transmission cap exceeded");
  }
  ++p.transmission_count;
  p.accumulated_sinr = harq_combine(p.accumulated_sinr, eff_sinr);
  p.state = HarqState::AwaitingFeedback;
}

HarqPool::FeedbackResult HarqPool::on_feedback(int pid, bool ack) {
  HarqProcess& p = slots_.at(pid);
  if (p.state != HarqState::AwaitingFeedback) {
    throw std::logic_error("HarqPool: feedback for a process not awaiting it");
  }
  FeedbackResult r;
  r.transmission_count = p.transmission_count;
  if (ack) {
    r.delivered = true;
    r.bits = p.payload_bits;
    p = HarqProcess{};
  } else if (p.transmission_count >= kMaxTransmissions) {
    r.dropped = true;
    p = HarqProcess{};
  } else {
    p.state = HarqState::PendingRetx;
  }
  return r;
}

std::vector<int> HarqPool::pending_retransmissions() const {
  std::vector<int> pids;
  for (int i = 0; i < kProcesses; ++i) {
    if (slots_[i].state == HarqState::PendingRetx) pids.push_back(i);
  }
  std::sort(pids.begin(), pids.end(), [this](int a, int b) {
    if (slots_[a].first_tx_tti != slots_[b].first_tx_tti) {
      return slots_[a].first_tx_tti < slots_[b].first_tx_tti;
    }
    return a < b;
  });
  return pids;
}

}  // namespace ofdmasim
