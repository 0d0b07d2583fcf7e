/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <vector>

#include "ofdmasim/common.hpp"

namespace ofdmasim {

struct Sector {
  int site = 0;
  double boresight_deg = 0.0;
};

/// Hexagonal site grid: one center site plus two rings (1 + 6 + 12),
/// three sectors per site with boresights 120 degrees apart.
struct CellLayout {
  std::vector<Eigen::Vector2d> sites;
  std::vector<Sector> sectors;
  double inter_site_distance_m = 0.0;

  int n_sites() const { return static_cast<int>(sites.size()); }
  int n_sectors() const { return static_cast<int>(sectors.size()); }
};

CellLayout build_layout(double inter_site_distance_m);

/// Macro-cell path loss, d in meters: 128.1 + 37.6*log10(d/1000).
/// Throws below the 35 m close-in bound.
double path_loss_db(double distance_m);

/// 3-sector pattern A(theta) = -min(12*(theta/70)^2, 20) dB.
/// Angle must already be normalized to [-180, 180].
double sector_gain_db(double angle_off_boresight_deg);

/// Wraps any angle in degrees to [-180, 180].
double wrap_angle_deg(double deg);

/// Large-scale link budget from one UE to every sector.
struct LargeScaleGain {
  Eigen::VectorXd path_loss_db;     // per sector
  Eigen::VectorXd shadowing_db;     // per sector
  Eigen::VectorXd antenna_gain_db;  // per sector

  /// antenna gain - path loss + shadowing, per sector.
  Eigen::VectorXd total_db() const {
    return antenna_gain_db - path_loss_db + shadowing_db;
  }
};

struct UePlacement {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  int serving_sector = -1;
  double distance_to_serving_m = 0.0;
  LargeScaleGain gains;
};

/// Index of the sector maximizing (antenna gain - path loss + shadowing);
/// ties go to the lowest sector id.
int best_server(const LargeScaleGain& gains);

/// Computes the large-scale gain vector for a position against all sectors.
/// Shadowing values are supplied by the caller (one per sector).
LargeScaleGain large_scale_gains(const CellLayout& layout,
                                 const Eigen::Vector2d& position,
                                 const Eigen::VectorXd& shadowing_db);

/// Drops `ues_per_cell` UEs into each of the three central-site sectors by
/// rejection sampling: uniform over the sampling disc, kept when the target
/// sector is the best server and every site is at least `min_distance_m`
/// away. Throws when the attempt budget is exhausted.
std::vector<UePlacement> drop_ues(const CellLayout& layout, int ues_per_cell,
                                  Rng& rng, double min_distance_m = 35.0,
                                  double shadowing_std_db = 8.0);

}  // namespace ofdmasim
