/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/sfr.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ofdmasim/common.hpp"

namespace ofdmasim {

std::vector<int> partition_subbands(int n_prb, int n_subbands) {
  if (n_subbands < 1) throw std::invalid_argument("partition_subbands: need at least one sub-band");
  if (n_subbands > n_prb) throw std::invalid_argument("partition_subbands: more sub-bands than PRBs");
  std::vector<int> sizes(n_subbands, n_prb / n_subbands);
  for (int i = 0; i < n_prb % n_subbands; ++i) ++sizes[i];
  return sizes;
}

PowerMask flat_mask(int n_prb) {
  return {MaskKind::Flat, {0.0}, {n_prb}};
}

PowerMask pm1_mask(int n_prb) {
  return {MaskKind::Sfr, {0.0, -4.0, -4.0}, partition_subbands(n_prb, 3)};
}

PowerMask pm2_mask(int n_prb) {
  return {MaskKind::Sfr, {0.0, -1.0, -4.0}, partition_subbands(n_prb, 3)};
}

PowerMask rb_pattern_mask() {
  return {MaskKind::RbPattern, {0.0, -1.0, -2.0}, {}};
}

PowerMask custom_sfr_mask(std::vector<double> levels_db, int n_prb) {
  if (levels_db.size() != 3) {
    throw std::invalid_argument("custom_sfr_mask: expected exactly 3 levels");
  }
  for (double l : levels_db) {
    if (l > 0.0) throw std::invalid_argument("custom_sfr_mask: levels must be <= 0 dB");
  }
  return {MaskKind::Sfr, std::move(levels_db), partition_subbands(n_prb, 3)};
}

PowerMask mask_by_name(const std::string& name, int n_prb) {
  if (name == "flat") return flat_mask(n_prb);
  if (name == "pm1") return pm1_mask(n_prb);
  if (name == "pm2") return pm2_mask(n_prb);
  if (name == "rb012") return rb_pattern_mask();
  throw std::invalid_argument("unknown power mask: " + name);
}

PrbPowerMap apply_sfr_mask(const PowerMask& mask, int sector_reuse_index,
                           double p_max_prb) {
  if (mask.kind == MaskKind::RbPattern) {
    throw std::invalid_argument("apply_sfr_mask: RB pattern has no sub-band structure");
  }
  const int n_bands = static_cast<int>(mask.subband_sizes.size());
  if (mask.kind == MaskKind::Sfr && n_bands != 3) {
    throw std::invalid_argument("apply_sfr_mask: SFR masks use exactly 3 sub-bands");
  }
  PrbPowerMap map;
  for (int b = 0; b < n_bands; ++b) {
    // Rotation: band b carries level (b - r) mod n, so band r is the 0 dB one.
    const int idx = ((b - sector_reuse_index) % n_bands + n_bands) % n_bands;
    const double frac = db_to_lin(mask.levels_db[idx]);
    for (int p = 0; p < mask.subband_sizes[b]; ++p) {
      map.fraction.push_back(frac);
      map.power_w.push_back(frac * p_max_prb);
    }
  }
  return map;
}

PrbPowerMap apply_rb_pattern(double p_max_prb, int n_prb) {
  if (n_prb < 1) throw std::invalid_argument("apply_rb_pattern: need at least one PRB");
  static const double kLevels[3] = {0.0, -1.0, -2.0};
  PrbPowerMap map;
  for (int p = 0; p < n_prb; ++p) {
    const double frac = db_to_lin(kLevels[p % 3]);
    map.fraction.push_back(frac);
    map.power_w.push_back(frac * p_max_prb);
  }
  return map;
}

PrbPowerMap prb_power_map(const PowerMask& mask, int sector_reuse_index,
                          double p_max_prb, int n_prb) {
  if (mask.kind == MaskKind::RbPattern) return apply_rb_pattern(p_max_prb, n_prb);
  const int total = std::accumulate(mask.subband_sizes.begin(), mask.subband_sizes.end(), 0);
  if (total != n_prb) throw std::invalid_argument("prb_power_map: mask does not cover the PRB grid");
  return apply_sfr_mask(mask, sector_reuse_index, p_max_prb);
}

int reuse_index_for(int sector_id) {
  if (sector_id < 0) throw std::invalid_argument("reuse_index_for: negative sector id");
  return sector_id % 3;
}

}  // namespace ofdmasim
