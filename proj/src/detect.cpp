/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/detect.hpp"

#include <stdexcept>

namespace ofdmasim {

double noise_variance_w(double bandwidth_hz, double noise_figure_db) {
  const double density_dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return dbm_to_watt(density_dbm);
}

Mat2cd interference_cov(const std::vector<double>& power_gain,
                        const std::vector<Vec2cd>& channels) {
  if (power_gain.size() != channels.size()) {
    throw std::invalid_argument("interference_cov: length mismatch");
  }
  Mat2cd sz = Mat2cd::Zero();
  for (std::size_t j = 0; j < channels.size(); ++j) {
    sz.noalias() += power_gain[j] * (channels[j] * channels[j].adjoint());
  }
  return sz;
}

Vec2cd mrc_weights(const Vec2cd& h) {
  const double n2 = h.squaredNorm();
  if (n2 <= 0.0) throw std::invalid_argument("mrc_weights: zero channel");
  return h / n2;
}

Vec2cd lmmse_single(const Vec2cd& h, const TxPowerSpec& tx, const Mat2cd& sn,
                    const Mat2cd& sz) {
  const double s = tx.sigma_x2 * tx.sigma_c2;
  const Mat2cd cov = s * (h * h.adjoint()) + sn + sz;
  // 2x2 inverse via cofactors (Eigen closed form); Sn > 0 keeps it regular.
  return s * (cov.inverse() * h);
}

double sinr_single(const Vec2cd& w, const Vec2cd& h, const TxPowerSpec& tx,
                   const Mat2cd& sn, const Mat2cd& sz) {
  const double s = tx.sigma_x2 * tx.sigma_c2;
  const double signal = std::norm(w.dot(h)) * s;  // Eigen dot = w^H h
  const double denom = (w.adjoint() * (sn + sz) * w).real()(0, 0);
  if (denom <= 0.0) throw std::invalid_argument("sinr_single: zero denominator");
  return signal / denom;
}

Mat2cd lmmse_dual(const Mat2cd& h, const TxPowerSpec& tx, const Mat2cd& sn,
                  const Mat2cd& sz) {
  const double ps = tx.sigma_x2 * tx.sigma_c2 * 0.5;
  const Mat2cd sx = ps * Mat2cd::Identity();
  const Mat2cd cov = h * sx * h.adjoint() + sn + sz;
  return sx * h.adjoint() * cov.inverse();
}

std::array<double, 2> sinr_dual(const Mat2cd& w, const Mat2cd& h,
                                const TxPowerSpec& tx, const Mat2cd& sn,
                                const Mat2cd& sz) {
  const double ps = tx.sigma_x2 * tx.sigma_c2 * 0.5;
  const Mat2cd wh = w * h;                    // (s, t) = w_s^H h_t
  const Mat2cd wnw = w * (sn + sz) * w.adjoint();
  std::array<double, 2> out{};
  for (int s = 0; s < 2; ++s) {
    const int o = 1 - s;
    const double signal = std::norm(wh(s, s)) * ps;
    const double denom = std::norm(wh(s, o)) * ps + wnw(s, s).real();
    if (denom <= 0.0) throw std::invalid_argument("sinr_dual: zero denominator");
    out[s] = signal / denom;
  }
  return out;
}

double sinr_mu_stream(const Mat2cd& w, const Mat2cd& h, const TxPowerSpec& tx,
                      const Mat2cd& sn, const Mat2cd& sz, int stream) {
  if (stream < 0 || stream > 1) throw std::invalid_argument("sinr_mu_stream: bad stream");
  return sinr_dual(w, h, tx, sn, sz)[stream];
}

}  // namespace ofdmasim
