/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "doctest.h"
#include "ofdmasim/channel.hpp"

#include <algorithm>
#include <cmath>

using namespace ofdmasim;

namespace {
const TapProfile kOnePath{{0.0}, {1.0}};
}

TEST_CASE("tu profile") {
  const TapProfile p = itu_tu20();
  REQUIRE(p.n_paths() == 20);
  double sum = 0.0;
  for (int i = 0; i < 20; ++i) {
    sum += p.powers_lin[i];
    if (i > 0) CHECK(p.delays_s[i] >= p.delays_s[i - 1]);
    CHECK(p.powers_lin[i] > 0.0);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.delays_s[0] == 0.0);
  CHECK(p.delays_s[19] == doctest::Approx(2.14e-6));
  // First path carries the most power (profile is sorted that way).
  CHECK(*std::max_element(p.powers_lin.begin(), p.powers_lin.end()) ==
        doctest::Approx(p.powers_lin[0]));
}

TEST_CASE("doppler from speed") {
  CHECK(doppler_hz(3.0, 2e9) == doctest::Approx(5.559).epsilon(1e-3));
}

TEST_CASE("fading determinism and zero-doppler limit") {
  Rng ra(99), rb(99);
  FadingLink a(2, itu_tu20(), 5.56, ra);
  FadingLink b(2, itu_tu20(), 5.56, rb);
  for (int t = 0; t < 10; ++t) {
    a.advance(1e-3);
    b.advance(1e-3);
  }
  for (int pair = 0; pair < 2; ++pair) {
    for (int path = 0; path < 20; ++path) {
      CHECK(std::abs(a.tap(pair, path) - b.tap(pair, path)) == 0.0);
    }
  }

  Rng rc(7);
  FadingLink c(1, kOnePath, 0.0, rc);
  const std::complex<double> t0 = c.tap(0, 0);
  for (int t = 0; t < 100; ++t) c.advance(1e-3);
  CHECK(std::abs(c.tap(0, 0) - t0) < 1e-12);
  CHECK(c.time_s() == doctest::Approx(0.1));
}

TEST_CASE("mean tap power is unit") {
  Rng rng(2024);
  double acc = 0.0;
  const int n_links = 10000;
  for (int l = 0; l < n_links; ++l) {
    FadingLink link(1, itu_tu20(), 5.56, rng);
    double p = 0.0;
    for (int path = 0; path < link.n_paths(); ++path) p += std::norm(link.tap(0, path));
    acc += p;
  }
  CHECK(acc / n_links == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("rayleigh envelope passes ks") {
  // Gaussian oscillator amplitudes give an exactly Rayleigh marginal;
  // the 1%-level KS critical value is 1.628/sqrt(n).
  Rng rng(31337);
  const int n = 100000;
  std::vector<double> env;
  env.reserve(n);
  for (int i = 0; i < n; ++i) {
    FadingLink link(1, kOnePath, 5.56, rng);
    env.push_back(std::abs(link.tap(0, 0)));
  }
  std::sort(env.begin(), env.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = 1.0 - std::exp(-env[i] * env[i]);  // unit mean power
    d = std::max(d, std::abs(cdf - (i + 1.0) / n));
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
  }
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("jakes autocorrelation tracks the bessel curve") {
  const double fd = 5.56;
  const int n_links = 4000;
  const int n_origins = 25;
  const int max_lag = 70;  // ms
  Rng rng(555);
  std::vector<double> corr(max_lag + 1, 0.0);
  long count = 0;
  for (int l = 0; l < n_links; ++l) {
    FadingLink link(1, kOnePath, fd, rng);
    std::vector<std::complex<double>> traj;
    traj.reserve(max_lag + n_origins + 1);
    traj.push_back(link.tap(0, 0));
    for (int t = 0; t < max_lag + n_origins; ++t) {
      link.advance(1e-3);
      traj.push_back(link.tap(0, 0));
    }
    for (int o = 0; o < n_origins; ++o) {
      for (int lag = 0; lag <= max_lag; ++lag) {
        corr[lag] += (traj[o] * std::conj(traj[o + lag])).real();
      }
    }
    count += n_origins;
  }
  const double norm = corr[0] / count;
  CHECK(norm == doctest::Approx(1.0).epsilon(0.05));

  for (int lag = 0; lag <= 50; ++lag) {
    const double rho = corr[lag] / count / norm;
    const double bessel = std::cyl_bessel_j(0.0, 2.0 * kPi * fd * lag * 1e-3);
    CHECK(std::abs(rho - bessel) < 0.05);
  }
  // One-TTI coherence is nearly perfect at pedestrian Doppler.
  CHECK(corr[1] / count / norm > 0.99);
  // First Bessel null: decorrelated within the estimation error.
  const int null_lag = static_cast<int>(std::round(2.405 / (2.0 * kPi * fd) * 1e3));
  CHECK(std::abs(corr[null_lag] / count / norm) < 0.05);
}

TEST_CASE("frequency response") {
  // Single zero-delay path: flat across the band.
  Rng rng(12);
  FadingLink flat(2, kOnePath, 5.56, rng);
  const auto freqs = prb_sample_freqs(50);
  REQUIRE(freqs.size() == 50);
  CHECK(freqs.front() == doctest::Approx(-294 * 15e3));
  CHECK(freqs.back() == doctest::Approx(294 * 15e3));
  const Eigen::MatrixXcd h = flat.freq_response(freqs);
  for (int f = 0; f < 50; ++f) {
    CHECK(std::abs(h(0, f) - flat.tap(0, 0)) < 1e-12);
    CHECK(std::abs(h(1, f) - flat.tap(1, 0)) < 1e-12);
  }

  // Two equal paths half a cycle apart cancel at the probe frequency.
  const double df = 180e3;
  const TapProfile tworay{{0.0, 1.0 / (2.0 * df)}, {0.5, 0.5}};
  const Eigen::MatrixXcd mix = make_mix(tworay, {df});
  Eigen::Vector2cd taps;
  taps << std::complex<double>(0.3, -0.4), std::complex<double>(0.3, -0.4);
  CHECK(std::abs((mix.col(0).array() * taps.array()).sum()) < 1e-12);

  // Delays aligned to the PRB-grid DFT make band-mean energy exact.
  const double step = 1.0 / (50.0 * 180e3);
  const TapProfile grid{{0.0, step, 3 * step, 7 * step}, {0.4, 0.3, 0.2, 0.1}};
  Rng rg(77);
  FadingLink gl(1, grid, 5.56, rg);
  const Eigen::MatrixXcd hg = gl.freq_response(freqs);
  double band = 0.0, taps_e = 0.0;
  for (int f = 0; f < 50; ++f) band += std::norm(hg(0, f));
  for (int p = 0; p < 4; ++p) taps_e += std::norm(gl.tap(0, p));
  CHECK(band / 50.0 == doctest::Approx(taps_e).epsilon(1e-12));

  CHECK(prb_sample_freqs(50, 3).size() == 150);
  CHECK_THROWS(prb_sample_freqs(50, 2));
}

TEST_CASE("mix_col matches freq_response") {
  Rng rng(3);
  FadingLink link(4, itu_tu20(), 5.56, rng);
  const auto freqs = prb_sample_freqs(50);
  const Eigen::MatrixXcd mix = make_mix(itu_tu20(), freqs);
  const Eigen::MatrixXcd full = link.freq_response(freqs);
  std::complex<double> out[4];
  for (int f = 0; f < 50; ++f) {
    link.mix_col(mix, f, out);
    for (int pair = 0; pair < 4; ++pair) {
      CHECK(std::abs(out[pair] - full(pair, f)) < 1e-12);
    }
  }
}

TEST_CASE("cqi quantizer") {
  CHECK(quantize_cqi_db(7.3) == 7.0);
  CHECK(quantize_cqi_db(7.9) == 7.0);
  CHECK(quantize_cqi_db(-0.2) == -1.0);
  CHECK(quantize_cqi_db(45.0) == 30.0);
  CHECK(quantize_cqi_db(-12.3) == -10.0);
}

TEST_CASE("cqi reporting grid and delay") {
  const std::vector<double> single(50, 7.3);
  const std::array<std::vector<double>, 2> dual{std::vector<double>(50, 3.0),
                                                std::vector<double>(50, 2.0)};
  CHECK_FALSE(measure_cqi(11, single, dual, dual).has_value());
  const auto r = measure_cqi(10, single, dual, dual);
  REQUIRE(r.has_value());
  CHECK(r->generated_tti == 10);
  CHECK(r->applied_tti == 12);
  CHECK(r->single_db[0] == 7.0);
  CHECK(r->su_db[0][10] == 3.0);
  CHECK(r->mu_db[1][49] == 2.0);
}

TEST_CASE("scheduler-visible report age stays in [2, 6]") {
  CqiState state;
  const std::vector<double> single(50, 5.0);
  const std::array<std::vector<double>, 2> dual{std::vector<double>(50, 5.0),
                                                std::vector<double>(50, 5.0)};
  for (long tti = 0; tti <= 100; ++tti) {
    if (auto r = measure_cqi(tti, single, dual, dual)) state.submit(std::move(*r));
    const CqiReport* cur = state.at(tti);
    if (tti < 2) {
      CHECK(cur == nullptr);
    } else {
      REQUIRE(cur != nullptr);
      const long age = tti - cur->generated_tti;
      CHECK(age >= 2);
      CHECK(age <= 6);
    }
  }
}
