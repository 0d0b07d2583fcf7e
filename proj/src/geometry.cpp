/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ofdmasim {

CellLayout build_layout(double inter_site_distance_m) {
  CellLayout layout;
  layout.inter_site_distance_m = inter_site_distance_m;

  // Axial hex coordinates; hex norm (|a|+|b|+|a+b|)/2 <= 2 gives the
  // 19-site pattern. Sites are emitted ring by ring so the center is id 0.
  struct Axial {
    int a, b, ring;
  };
  std::vector<Axial> cells;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const int ring = (std::abs(a) + std::abs(b) + std::abs(a + b)) / 2;
      if (ring <= 2) cells.push_back({a, b, ring});
    }
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Axial& x, const Axial& y) { return x.ring < y.ring; });

  const double d = inter_site_distance_m;
  for (const Axial& c : cells) {
    layout.sites.emplace_back(d * (c.a + 0.5 * c.b), d * (std::sqrt(3.0) / 2.0) * c.b);
  }
  for (int s = 0; s < layout.n_sites(); ++s) {
    for (int k = 0; k < 3; ++k) {
      layout.sectors.push_back({s, 120.0 * k});
    }
  }
  return layout;
}

double path_loss_db(double distance_m) {
  if (distance_m < 35.0) {
    throw std::invalid_argument("path_loss_db: distance below 35 m close-in bound");
  }
  return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

double wrap_angle_deg(double deg) {
  deg = std::fmod(deg + 180.0, 360.0);
  if (deg < 0.0) deg += 360.0;
  return deg - 180.0;
}

double sector_gain_db(double angle_off_boresight_deg) {
  const double t = angle_off_boresight_deg / 70.0;
  return -std::min(12.0 * t * t, 20.0);
}

int best_server(const LargeScaleGain& gains) {
  const Eigen::VectorXd total = gains.total_db();
  int best = 0;
  for (int s = 1; s < total.size(); ++s) {
    if (total[s] > total[best]) best = s;
  }
  return best;
}

LargeScaleGain large_scale_gains(const CellLayout& layout,
                                 const Eigen::Vector2d& position,
                                 const Eigen::VectorXd& shadowing_db) {
  const int n = layout.n_sectors();
  LargeScaleGain g;
  g.path_loss_db.resize(n);
  g.shadowing_db = shadowing_db;
  g.antenna_gain_db.resize(n);
  for (int s = 0; s < n; ++s) {
    const Sector& sec = layout.sectors[s];
    const Eigen::Vector2d delta = position - layout.sites[sec.site];
    const double dist = delta.norm();
    g.path_loss_db[s] = path_loss_db(dist);
    const double bearing = std::atan2(delta.y(), delta.x()) * 180.0 / kPi;
    g.antenna_gain_db[s] = sector_gain_db(wrap_angle_deg(bearing - sec.boresight_deg));
  }
  return g;
}

std::vector<UePlacement> drop_ues(const CellLayout& layout, int ues_per_cell,
                                  Rng& rng, double min_distance_m,
                                  double shadowing_std_db) {
  std::vector<UePlacement> ues;
  ues.reserve(3 * static_cast<std::size_t>(ues_per_cell));
  const double radius = layout.inter_site_distance_m;
  const int n_sectors = layout.n_sectors();

  for (int target = 0; target < 3; ++target) {
    for (int u = 0; u < ues_per_cell; ++u) {
      bool placed = false;
      for (int attempt = 0; attempt < 20000; ++attempt) {
        const double r = radius * std::sqrt(rng.u01());
        const double phi = 2.0 * kPi * rng.u01();
        const Eigen::Vector2d pos(r * std::cos(phi), r * std::sin(phi));

        bool too_close = false;
        for (const Eigen::Vector2d& site : layout.sites) {
          if ((pos - site).norm() < min_distance_m) {
            too_close = true;
            break;
          }
        }
        if (too_close) continue;

        Eigen::VectorXd shadow(n_sectors);
        for (int s = 0; s < n_sectors; ++s) shadow[s] = shadowing_std_db * rng.normal();

        UePlacement ue;
        ue.position = pos;
        ue.gains = large_scale_gains(layout, pos, shadow);
        ue.serving_sector = best_server(ue.gains);
        if (ue.serving_sector != target) continue;

        const int site = layout.sectors[target].site;
        ue.distance_to_serving_m = (pos - layout.sites[site]).norm();
        ues.push_back(std::move(ue));
        placed = true;
        break;
      }
      if (!placed) {
        throw std::runtime_error("drop_ues: attempt budget exhausted");
      }
    }
  }
  return ues;
}

}  // namespace ofdmasim
