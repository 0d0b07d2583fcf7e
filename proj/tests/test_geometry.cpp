/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "doctest.h"
#include "ofdmasim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace ofdmasim;

TEST_CASE("path loss anchors") {
  CHECK(path_loss_db(1000.0) == doctest::Approx(128.1).epsilon(1e-12));
  CHECK(path_loss_db(500.0) == doctest::Approx(116.78).epsilon(1e-3));
  // One decade of distance adds exactly the slope.
  CHECK(path_loss_db(10000.0) - path_loss_db(1000.0) == doctest::Approx(37.6).epsilon(1e-12));
  CHECK_THROWS(path_loss_db(34.9));
  CHECK_NOTHROW(path_loss_db(35.0));
}

TEST_CASE("sector antenna pattern") {
  CHECK(sector_gain_db(0.0) == doctest::Approx(0.0));
  CHECK(sector_gain_db(70.0) == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(sector_gain_db(-70.0) == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(sector_gain_db(180.0) == doctest::Approx(-20.0).epsilon(1e-12));
  // Floor kicks in at 70*sqrt(20/12) degrees.
  const double edge = 70.0 * std::sqrt(20.0 / 12.0);
  CHECK(sector_gain_db(edge + 0.1) == doctest::Approx(-20.0).epsilon(1e-12));
  // Monotone nonincreasing in |angle|.
  double prev = 1.0;
  for (double a = 0.0; a <= 180.0; a += 0.5) {
    const double g = sector_gain_db(a);
    CHECK(g <= prev + 1e-12);
    prev = g;
  }
}

TEST_CASE("angle wrap") {
  CHECK(wrap_angle_deg(190.0) == doctest::Approx(-170.0));
  CHECK(wrap_angle_deg(-190.0) == doctest::Approx(170.0));
  CHECK(wrap_angle_deg(360.0) == doctest::Approx(0.0));
  CHECK(wrap_angle_deg(45.0) == doctest::Approx(45.0));
}

TEST_CASE("hex layout shape") {
  const CellLayout layout = build_layout(500.0);
  CHECK(layout.n_sites() == 19);
  CHECK(layout.n_sectors() == 57);
  CHECK(layout.sites[0].norm() == doctest::Approx(0.0));

  // Nearest-neighbor spacing equals the inter-site distance.
  double min_pair = 1e18;
  for (int i = 0; i < 19; ++i) {
    for (int j = i + 1; j < 19; ++j) {
      min_pair = std::min(min_pair, (layout.sites[i] - layout.sites[j]).norm());
    }
  }
  CHECK(min_pair == doctest::Approx(500.0).epsilon(1e-9));

  // First ring has six sites at exactly one ISD from the center.
  int at_isd = 0;
  for (int i = 1; i < 19; ++i) {
    if (std::abs(layout.sites[i].norm() - 500.0) < 1e-6) ++at_isd;
  }
  CHECK(at_isd == 6);

  // Sector boresights are 0/120/240 per site.
  for (int s = 0; s < layout.n_sectors(); ++s) {
    CHECK(layout.sectors[s].site == s / 3);
    CHECK(layout.sectors[s].boresight_deg == doctest::Approx(120.0 * (s % 3)));
  }
}

TEST_CASE("ue drops honor constraints") {
  const CellLayout layout = build_layout(500.0);
  Rng rng(1234);
  const auto ues = drop_ues(layout, 10, rng);
  REQUIRE(ues.size() == 30);

  for (std::size_t i = 0; i < ues.size(); ++i) {
    const UePlacement& ue = ues[i];
    const int expected_sector = static_cast<int>(i) / 10;
    CHECK(ue.serving_sector == expected_sector);
    CHECK(ue.serving_sector == best_server(ue.gains));
    for (const auto& site : layout.sites) {
      CHECK((ue.position - site).norm() >= 35.0 - 1e-9);
    }
    // Combined gain decomposes as antenna - path loss + shadowing.
    const Eigen::VectorXd total = ue.gains.total_db();
    for (int s = 0; s < total.size(); ++s) {
      CHECK(total[s] == doctest::Approx(ue.gains.antenna_gain_db[s] -
                                        ue.gains.path_loss_db[s] +
                                        ue.gains.shadowing_db[s]));
    }
  }
}

TEST_CASE("ue drops are deterministic in the seed") {
  const CellLayout layout = build_layout(500.0);
  Rng a(77), b(77), c(78);
  const auto ua = drop_ues(layout, 5, a);
  const auto ub = drop_ues(layout, 5, b);
  const auto uc = drop_ues(layout, 5, c);
  REQUIRE(ua.size() == ub.size());
  bool all_equal = true;
  bool any_diff_seed = false;
  for (std::size_t i = 0; i < ua.size(); ++i) {
    if ((ua[i].position - ub[i].position).norm() != 0.0) all_equal = false;
    if ((ua[i].position - uc[i].position).norm() > 1e-12) any_diff_seed = true;
  }
  CHECK(all_equal);
  CHECK(any_diff_seed);
}
