/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <array>
#include <vector>

#include "ofdmasim/common.hpp"

namespace ofdmasim {

enum class TxMode { Single, SuDual, MuDual };

/// Transmit power at one frequency sample. sigma_x2 is the symbol power
/// budget for the PRB, sigma_c2 the power-mask fraction; dual-stream modes
/// split sigma_x2 evenly across the two streams.
struct TxPowerSpec {
  double sigma_x2 = 1.0;
  double sigma_c2 = 1.0;
  bool dual = false;

  double stream_power() const { return sigma_x2 * sigma_c2 * (dual ? 0.5 : 1.0); }
};

/// Per-antenna thermal noise power in W for a given bandwidth and receiver
/// noise figure (thermal density -174 dBm/Hz).
double noise_variance_w(double bandwidth_hz, double noise_figure_db);

inline Mat2cd noise_cov(double sigma_n2) {
  return sigma_n2 * Mat2cd::Identity();
}

/// Aggregate inter-cell interference covariance: sum of rank-one outer
/// products P_j*g_j*h_j*h_j^H over interfering sectors. `power_gain` holds
/// the products P_j*g_j already combined.
Mat2cd interference_cov(const std::vector<double>& power_gain,
                        const std::vector<Vec2cd>& channels);

/// Maximum-ratio combiner w = h/||h||^2; unbiased (w^H h = 1).
Vec2cd mrc_weights(const Vec2cd& h);

/// Single-stream LMMSE weight w = s*(h h^H s + Sn + Sz)^{-1} h with
/// s = sigma_x2*sigma_c2.
Vec2cd lmmse_single(const Vec2cd& h, const TxPowerSpec& tx, const Mat2cd& sn,
                    const Mat2cd& sz);

/// Post-detector SINR for any single-stream weight:
/// |w^H h|^2 s / (w^H Sn w + w^H Sz w).
double sinr_single(const Vec2cd& w, const Vec2cd& h, const TxPowerSpec& tx,
                   const Mat2cd& sn, const Mat2cd& sz);

/// Dual-stream LMMSE W = Sx H^H (H Sx H^H + Sn + Sz)^{-1}, with
/// Sx = sigma_c2*diag(sigma_x2/2, sigma_x2/2). Row s of W is w_s^H.
Mat2cd lmmse_dual(const Mat2cd& h, const TxPowerSpec& tx, const Mat2cd& sn,
                  const Mat2cd& sz);

/// Per-stream SINRs after a dual-stream detector: the other stream's
/// leakage counts as interference.
std::array<double, 2> sinr_dual(const Mat2cd& w, const Mat2cd& h,
                                const TxPowerSpec& tx, const Mat2cd& sn,
                                const Mat2cd& sz);

/// Multi-user variant: the owning UE evaluates the same dual-stream
/// arithmetic with its own channel and covariances, and reads off the SINR
/// of its own stream.
double sinr_mu_stream(const Mat2cd& w, const Mat2cd& h, const TxPowerSpec& tx,
                      const Mat2cd& sn, const Mat2cd& sz, int stream);

}  // namespace ofdmasim
