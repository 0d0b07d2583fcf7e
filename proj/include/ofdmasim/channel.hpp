/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ofdmasim/common.hpp"

namespace ofdmasim {

/// Power-delay profile; powers are linear and normalized to sum 1.
struct TapProfile {
  std::vector<double> delays_s;
  std::vector<double> powers_lin;

  int n_paths() const { return static_cast<int>(delays_s.size()); }
};

/// ITU Typical Urban, 20 paths.
TapProfile itu_tu20();

/// Doppler shift for a given speed and carrier.
inline double doppler_hz(double speed_kmh, double carrier_hz) {
  return (speed_kmh / 3.6) * carrier_hz / kSpeedOfLight;
}

/// Complex exponentials exp(-j*2*pi*f*tau), one column per sample
/// frequency (n_paths x n_freqs); shared by every link since delays and
/// the sample grid are global.
Eigen::MatrixXcd make_mix(const TapProfile& profile,
                          const std::vector<double>& freqs_hz);

/// Baseband sample frequencies for a PRB grid of 12-subcarrier blocks at
/// 15 kHz spacing, centered on DC. samples_per_prb is 1 (center) or 3.
std::vector<double> prb_sample_freqs(int n_prb, int samples_per_prb = 1);

/// Sum-of-sinusoids Rayleigh fading for one link: n_pairs independent
/// antenna pairs, each path a sum of n_osc oscillators with Gaussian
/// amplitudes (exact Rayleigh envelope) and Jakes-distributed Doppler
/// shifts. Advancing rotates per-oscillator phasors in place.
class FadingLink {
 public:
  FadingLink(int n_pairs, const TapProfile& profile, double doppler_hz,
             Rng& rng, int n_osc = 16);

  /// Steps time forward; repeated equal steps reuse cached rotators.
  void advance(double dt_s);

  int n_pairs() const { return n_pairs_; }
  int n_paths() const { return n_paths_; }
  double time_s() const { return time_; }

  std::complex<double> tap(int pair, int path) const {
    const std::size_t i = static_cast<std::size_t>(pair) * n_paths_ + path;
    return {tap_re_[i], tap_im_[i]};
  }

  /// H at one sample column of the mix matrix, one value per antenna pair.
  void mix_col(const Eigen::MatrixXcd& mix, int col,
               std::complex<double>* out) const;

  /// Full response, n_pairs x n_freqs.
  Eigen::MatrixXcd freq_response(const std::vector<double>& freqs_hz) const;

 private:
  void refresh_taps();

  int n_pairs_;
  int n_paths_;
  int n_osc_;
  double time_ = 0.0;
  double cached_dt_ = -1.0;
  std::vector<double> delays_s_;
  std::vector<double> omega_;  // rad/s per oscillator
  // Oscillator phasors and step rotators, split into quadratures so the
  // per-TTI sweep vectorizes; path power is folded into the amplitudes.
  std::vector<double> ph_re_, ph_im_;
  std::vector<double> rot_re_, rot_im_;
  std::vector<double> tap_re_, tap_im_;  // [pair][path]
};

/// Quantized per-PRB SINR snapshot for all transmission modes; generated
/// every reporting period, visible to the scheduler after the delay.
struct CqiReport {
  long generated_tti = -1;
  long applied_tti = -1;
  std::vector<double> single_db;                  // per PRB
  std::array<std::vector<double>, 2> su_db;       // per stream, per PRB
  std::array<std::vector<double>, 2> mu_db;       // per stream, per PRB
};

/// Floor to 1 dB steps, clamped to [-10, 30] dB.
double quantize_cqi_db(double sinr_db);

constexpr int kCqiPeriodTtis = 5;
constexpr int kCqiDelayTtis = 2;

inline bool cqi_due(long tti) { return tti % kCqiPeriodTtis == 0; }

/// Builds a report from raw per-PRB SINRs (dB), applying quantization and
/// stamping the visibility TTI. Returns nothing off the reporting grid.
std::optional<CqiReport> measure_cqi(long tti,
                                     const std::vector<double>& single_db,
                                     const std::array<std::vector<double>, 2>& su_db,
                                     const std::array<std::vector<double>, 2>& mu_db);

/// Holds the pending and currently applied report for one UE.
class CqiState {
 public:
  void submit(CqiReport report) { pending_ = std::move(report); }

  /// Report visible at `tti`, promoting the pending one when due;
  /// nullptr until the first report lands.
  const CqiReport* at(long tti) {
    if (pending_ && pending_->applied_tti <= tti) {
      applied_ = std::move(*pending_);
      pending_.reset();
    }
    return applied_ ? &*applied_ : nullptr;
  }

 private:
  std::optional<CqiReport> applied_;
  std::optional<CqiReport> pending_;
};

}  // namespace ofdmasim
