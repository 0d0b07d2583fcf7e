/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/link_adapt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ofdmasim {

namespace {
constexpr double kLn4 = 1.3862943611198906;  // logistic 20% point offset in slopes
}

double McsEntry::decision_threshold_db() const {
  return threshold_db + slope_db * kLn4;
}

void McsTable::validate() const {
  if (entries.empty()) throw std::invalid_argument("McsTable: empty");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const McsEntry& e = entries[i];
    if (e.bits_per_symbol < 1 || e.code_rate <= 0.0 || e.code_rate > 1.0 ||
        e.beta <= 0.0 || e.slope_db <= 0.0) {
      throw std::invalid_argument("McsTable: bad entry " + std::to_string(i));
    }
    if (i > 0 && entries[i].spectral_efficiency() <= entries[i - 1].spectral_efficiency()) {
      throw std::invalid_argument("McsTable: spectral efficiency not strictly increasing");
    }
  }
}

McsTable default_mcs_table() {
  struct Scheme {
    int bits;
    double rate;
  };
  // QPSK 1/3..2/3, 16QAM 1/2..4/5, 64QAM 1/2..4/5, merged by efficiency
  // (64QAM 1/2 at 3.0 lands below 16QAM 4/5 at 3.2).
  const Scheme schemes[] = {{2, 1.0 / 3.0}, {2, 0.5},       {2, 2.0 / 3.0},
                            {4, 0.5},       {4, 2.0 / 3.0}, {6, 0.5},
                            {4, 0.8},       {6, 2.0 / 3.0}, {6, 0.8}};
  const double eff_lo = 2.0 / 3.0;
  const double eff_hi = 4.8;
  McsTable table;
  for (const Scheme& s : schemes) {
    McsEntry e;
    e.bits_per_symbol = s.bits;
    e.code_rate = s.rate;
    const double eff = e.spectral_efficiency();
    e.beta = 1.0 + 19.0 * (eff - eff_lo) / (eff_hi - eff_lo);
    e.slope_db = 0.6;
    // Midpoint such that the 20% point is the Shannon SINR of this
    // efficiency plus a 2 dB implementation margin.
    const double shannon_db = 10.0 * std::log10(std::pow(2.0, eff) - 1.0);
    e.threshold_db = shannon_db + 2.0 - e.slope_db * kLn4;
    table.entries.push_back(e);
  }
  table.validate();
  return table;
}

double eesm(const double* sinrs_linear, int n, double beta) {
  if (n < 1) throw std::invalid_argument("eesm: empty input");
  if (beta <= 0.0) throw std::invalid_argument("eesm: beta must be positive");
  double lo = sinrs_linear[0];
  for (int i = 1; i < n; ++i) lo = std::min(lo, sinrs_linear[i]);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::exp(-(sinrs_linear[i] - lo) / beta);
  return lo - beta * std::log(acc / n);
}

double eesm(const std::vector<double>& sinrs_linear, double beta) {
  return eesm(sinrs_linear.data(), static_cast<int>(sinrs_linear.size()), beta);
}

double blep(const McsEntry& mcs, double effective_sinr_db) {
  return 1.0 / (1.0 + std::exp((effective_sinr_db - mcs.threshold_db) / mcs.slope_db));
}

std::optional<int> select_mcs(double effective_sinr_db, double olla_offset_db,
                              const McsTable& table) {
  const double decision = effective_sinr_db - olla_offset_db;
  for (int m = table.size() - 1; m >= 0; --m) {
    if (decision >= table[m].decision_threshold_db()) return m;
  }
  return std::nullopt;
}

long estimate_rate(const McsEntry& mcs, int n_prb) {
  if (n_prb < 1) throw std::invalid_argument("estimate_rate: need at least one PRB");
  const double per_prb = 12.0 * 14.0 * mcs.bits_per_symbol * mcs.code_rate;
  return static_cast<long>(n_prb) * static_cast<long>(per_prb);
}

OllaState make_olla(double step_up_db, double target_bler, double clamp_db) {
  if (target_bler <= 0.0 || target_bler >= 1.0) {
    throw std::invalid_argument("make_olla: target must be in (0, 1)");
  }
  OllaState s;
  s.step_up_db = step_up_db;
  s.step_down_db = step_up_db * target_bler / (1.0 - target_bler);
  s.clamp_db = clamp_db;
  return s;
}

void olla_update(OllaState& state, bool ack) {
  state.offset_db += ack ? -state.step_down_db : state.step_up_db;
  state.offset_db = std::clamp(state.offset_db, -state.clamp_db, state.clamp_db);
}

}  // namespace ofdmasim
