/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/channel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ofdmasim {

TapProfile itu_tu20() {
  static const double delays_ns[20] = {0,    217,  512,  514,  517,  674,  882,
                                       1230, 1287, 1311, 1349, 1533, 1535, 1622,
                                       1818, 1836, 1884, 1943, 2048, 2140};
  static const double powers_db[20] = {-5.7,  -7.6,  -10.1, -10.2, -10.2,
                                       -11.5, -13.4, -16.3, -16.9, -17.1,
                                       -17.4, -19.0, -19.0, -19.8, -21.5,
                                       -21.6, -22.1, -22.6, -23.5, -24.3};
  TapProfile p;
  double total = 0.0;
  for (int i = 0; i < 20; ++i) {
    p.delays_s.push_back(delays_ns[i] * 1e-9);
    p.powers_lin.push_back(db_to_lin(powers_db[i]));
    total += p.powers_lin.back();
  }
  for (double& w : p.powers_lin) w /= total;
  return p;
}

Eigen::MatrixXcd make_mix(const TapProfile& profile,
                          const std::vector<double>& freqs_hz) {
  const int nf = static_cast<int>(freqs_hz.size());
  const int np = profile.n_paths();
  Eigen::MatrixXcd m(np, nf);
  for (int f = 0; f < nf; ++f) {
    for (int p = 0; p < np; ++p) {
      const double phase = -2.0 * kPi * freqs_hz[f] * profile.delays_s[p];
      m(p, f) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return m;
}

std::vector<double> prb_sample_freqs(int n_prb, int samples_per_prb) {
  if (samples_per_prb != 1 && samples_per_prb != 3) {
    throw std::invalid_argument("prb_sample_freqs: 1 or 3 samples per PRB");
  }
  const double spacing = 15e3;
  const int half = n_prb * 12 / 2;  // active band is symmetric around DC
  std::vector<double> freqs;
  for (int prb = 0; prb < n_prb; ++prb) {
    if (samples_per_prb == 1) {
      freqs.push_back((prb * 12 + 6 - half) * spacing);
    } else {
      for (int off : {2, 6, 10}) {
        freqs.push_back((prb * 12 + off - half) * spacing);
      }
    }
  }
  return freqs;
}

FadingLink::FadingLink(int n_pairs, const TapProfile& profile,
                       double doppler_hz, Rng& rng, int n_osc)
    : n_pairs_(n_pairs), n_paths_(profile.n_paths()), n_osc_(n_osc) {
  if (n_pairs < 1 || n_osc < 1) throw std::invalid_argument("FadingLink: bad shape");
  if (doppler_hz < 0.0) throw std::invalid_argument("FadingLink: negative Doppler");
  delays_s_ = profile.delays_s;

  const std::size_t total =
      static_cast<std::size_t>(n_pairs_) * n_paths_ * n_osc_;
  ph_re_.resize(total);
  ph_im_.resize(total);
  omega_.resize(total);
  std::size_t i = 0;
  for (int pair = 0; pair < n_pairs_; ++pair) {
    for (int path = 0; path < n_paths_; ++path) {
      // Gaussian oscillator amplitudes make the path sum exactly Rayleigh;
      // uniform arrival angles give the Jakes Doppler spectrum.
      const double amp = std::sqrt(profile.powers_lin[path] / (2.0 * n_osc_));
      for (int o = 0; o < n_osc_; ++o, ++i) {
        ph_re_[i] = amp * rng.normal();
        ph_im_[i] = amp * rng.normal();
        omega_[i] = 2.0 * kPi * doppler_hz * std::cos(2.0 * kPi * rng.u01());
      }
    }
  }
  tap_re_.resize(static_cast<std::size_t>(n_pairs_) * n_paths_);
  tap_im_.resize(tap_re_.size());
  refresh_taps();
}

void FadingLink::advance(double dt_s) {
  if (dt_s < 0.0) throw std::invalid_argument("FadingLink: time must not move backwards");
  if (dt_s != cached_dt_) {
    rot_re_.resize(omega_.size());
    rot_im_.resize(omega_.size());
    for (std::size_t i = 0; i < omega_.size(); ++i) {
      rot_re_[i] = std::cos(omega_[i] * dt_s);
      rot_im_[i] = std::sin(omega_[i] * dt_s);
    }
    cached_dt_ = dt_s;
  }
  // Fused phasor rotation and per-path accumulation, one memory sweep.
  double* __restrict pre = ph_re_.data();
  double* __restrict pim = ph_im_.data();
  const double* __restrict rre = rot_re_.data();
  const double* __restrict rim = rot_im_.data();
  const std::size_t n_taps = tap_re_.size();
  for (std::size_t t = 0; t < n_taps; ++t) {
    const std::size_t base = t * n_osc_;
    double acc_re = 0.0, acc_im = 0.0;
    for (int o = 0; o < n_osc_; ++o) {
      const std::size_t i = base + o;
      const double re = pre[i] * rre[i] - pim[i] * rim[i];
      const double im = pre[i] * rim[i] + pim[i] * rre[i];
      pre[i] = re;
      pim[i] = im;
      acc_re += re;
      acc_im += im;
    }
    tap_re_[t] = acc_re;
    tap_im_[t] = acc_im;
  }
  time_ += dt_s;
}

void FadingLink::refresh_taps() {
  const double* pre = ph_re_.data();
  const double* pim = ph_im_.data();
  const std::size_t n_taps = tap_re_.size();
  for (std::size_t t = 0; t < n_taps; ++t) {
    double acc_re = 0.0, acc_im = 0.0;
    for (int o = 0; o < n_osc_; ++o) {
      acc_re += pre[t * n_osc_ + o];
      acc_im += pim[t * n_osc_ + o];
    }
    tap_re_[t] = acc_re;
    tap_im_[t] = acc_im;
  }
}

void FadingLink::mix_col(const Eigen::MatrixXcd& mix, int col,
                         std::complex<double>* out) const {
  const std::complex<double>* m = mix.col(col).data();
  for (int pair = 0; pair < n_pairs_; ++pair) {
    const std::size_t base = static_cast<std::size_t>(pair) * n_paths_;
    double acc_re = 0.0, acc_im = 0.0;
    for (int p = 0; p < n_paths_; ++p) {
      const double mre = m[p].real(), mim = m[p].imag();
      acc_re += tap_re_[base + p] * mre - tap_im_[base + p] * mim;
      acc_im += tap_re_[base + p] * mim + tap_im_[base + p] * mre;
    }
    out[pair] = {acc_re, acc_im};
  }
}

Eigen::MatrixXcd FadingLink::freq_response(
    const std::vector<double>& freqs_hz) const {
  const int nf = static_cast<int>(freqs_hz.size());
  TapProfile delays_only;
  delays_only.delays_s = delays_s_;
  delays_only.powers_lin.assign(delays_s_.size(), 0.0);
  const Eigen::MatrixXcd mix = make_mix(delays_only, freqs_hz);
  Eigen::MatrixXcd h(n_pairs_, nf);
  std::vector<std::complex<double>> out(n_pairs_);
  for (int f = 0; f < nf; ++f) {
    mix_col(mix, f, out.data());
    for (int pair = 0; pair < n_pairs_; ++pair) h(pair, f) = out[pair];
  }
  return h;
}

double quantize_cqi_db(double sinr_db) {
  double q = std::floor(sinr_db);
  if (q < -10.0) q = -10.0;
  if (q > 30.0) q = 30.0;
  return q;
}

std::optional<CqiReport> measure_cqi(
    long tti, const std::vector<double>& single_db,
    const std::array<std::vector<double>, 2>& su_db,
    const std::array<std::vector<double>, 2>& mu_db) {
  if (!cqi_due(tti)) return std::nullopt;
  CqiReport r;
  r.generated_tti = tti;
  r.applied_tti = tti + kCqiDelayTtis;
  r.single_db.reserve(single_db.size());
  for (double v : single_db) r.single_db.push_back(quantize_cqi_db(v));
  for (int s = 0; s < 2; ++s) {
    r.su_db[s].reserve(su_db[s].size());
    for (double v : su_db[s]) r.su_db[s].push_back(quantize_cqi_db(v));
    r.mu_db[s].reserve(mu_db[s].size());
    for (double v : mu_db[s]) r.mu_db[s].push_back(quantize_cqi_db(v));
  }
  return r;
}

}  // namespace ofdmasim
