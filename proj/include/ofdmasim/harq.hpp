/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <array>
#include <vector>

namespace ofdmasim {

enum class HarqState { Idle, AwaitingFeedback, PendingRetx };

struct HarqProcess {
  HarqState state = HarqState::Idle;
  int transmission_count = 0;
  double accumulated_sinr = 0.0;  // linear, ideal chase combining
  long payload_bits = 0;
  int mcs = -1;
  int n_prb = 0;  // retransmissions keep the original format
  long first_tx_tti = -1;
};

/// Ideal chase combining adds linear effective SINRs.
inline double harq_combine(double accumulated, double fresh) {
  return accumulated + fresh;
}

/// Six stop-and-wait processes for one (UE, stream). One initial
/// transmission plus at most three retransmissions per process.
class HarqPool {
 public:
  static constexpr int kProcesses = 6;
  static constexpr int kMaxTransmissions = 4;

  bool has_idle() const;

  /// First-fit slot claim; throws when all six are in flight.
  int start_transmission(long payload_bits, int mcs, int n_prb, double eff_sinr,
                         long tti);

  /// Re-sends a pending process: bumps the count and combines SINR.
  void retransmit(int pid, double eff_sinr);

  struct FeedbackResult {
    bool delivered = false;
    bool dropped = false;
    long bits = 0;
    int transmission_count = 0;
  };

  /// ACK credits the payload and frees the slot; NACK queues a
  /// retransmission until the fourth attempt, which drops the packet.
  FeedbackResult on_feedback(int pid, bool ack);

  /// Pending process ids, oldest initial transmission first.
  std::vector<int> pending_retransmissions() const;

  const HarqProcess& process(int pid) const { return slots_.at(pid); }
  int in_flight() const;

 private:
  std::array<HarqProcess, kProcesses> slots_{};
};

}  // namespace ofdmasim
