/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <optional>
#include <vector>

namespace ofdmasim {

/// One modulation-and-coding scheme with its EESM compression factor and
/// logistic block-error curve (midpoint threshold_db, slope slope_db).
struct McsEntry {
  int bits_per_symbol = 2;
  double code_rate = 1.0 / 3.0;
  double beta = 1.0;
  double threshold_db = 0.0;
  double slope_db = 0.6;

  double spectral_efficiency() const { return bits_per_symbol * code_rate; }
  /// SINR where the block-error probability crosses the 20% target.
  double decision_threshold_db() const;
};

struct McsTable {
  std::vector<McsEntry> entries;

  int size() const { return static_cast<int>(entries.size()); }
  const McsEntry& operator[](int i) const { return entries[i]; }
  /// Enforces nonempty table with strictly increasing spectral efficiency.
  void validate() const;
};

/// Nine schemes, QPSK/16QAM/64QAM with rates 1/3..4/5, sorted by spectral
/// efficiency. Curve midpoints sit 2 dB above the Shannon SINR of each
/// efficiency; slopes are 0.6 dB; EESM beta scales linearly from 1 to 20
/// across the efficiency range. All of it plain data, replaceable from the
/// run config.
McsTable default_mcs_table();

/// Exponential effective SINR: -beta*ln(mean exp(-g/beta)), inputs linear.
/// Shift-by-min keeps the mean away from total underflow.
double eesm(const double* sinrs_linear, int n, double beta);
double eesm(const std::vector<double>& sinrs_linear, double beta);

/// Logistic block-error probability at an effective SINR in dB.
double blep(const McsEntry& mcs, double effective_sinr_db);

/// Highest MCS whose BLEP at (effective_sinr_db - olla_offset_db) stays at
/// or below 20%; nullopt when even the lowest fails.
std::optional<int> select_mcs(double effective_sinr_db, double olla_offset_db,
                              const McsTable& table);

/// Transport bits for one TTI: per-PRB payload 12 subcarriers x 14 symbols
/// x bits/symbol x rate, floored per PRB so the total stays linear in n_prb.
long estimate_rate(const McsEntry& mcs, int n_prb);

/// Outer-loop offset driven by first-transmission ACK/NACK feedback.
/// step_down/(step_down+step_up) sets the converged block-error rate.
struct OllaState {
  double offset_db = 0.0;
  double step_up_db = 0.5;
  double step_down_db = 0.125;
  double clamp_db = 5.0;
};

OllaState make_olla(double step_up_db, double target_bler, double clamp_db = 5.0);
void olla_update(OllaState& state, bool ack);

}  // namespace ofdmasim
