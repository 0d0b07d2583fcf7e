/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <vector>

namespace ofdmasim {

enum class MaskKind { Flat, Sfr, RbPattern };

/// Relative transmit-power template. For Sfr masks the level list maps onto
/// contiguous sub-bands and is rotated per sector; for RbPattern it repeats
/// PRB by PRB with no rotation.
struct PowerMask {
  MaskKind kind = MaskKind::Flat;
  std::vector<double> levels_db;
  std::vector<int> subband_sizes;
};

/// Absolute per-PRB transmit power and the fraction sigma_c^2 of the
/// per-PRB maximum. Computed once per sector, immutable afterwards.
struct PrbPowerMap {
  std::vector<double> power_w;
  std::vector<double> fraction;

  int n_prb() const { return static_cast<int>(fraction.size()); }
};

/// Splits n_prb into n_subbands contiguous blocks, as equal as possible,
/// larger blocks first. (50, 3) -> (17, 17, 16).
std::vector<int> partition_subbands(int n_prb, int n_subbands);

PowerMask flat_mask(int n_prb);
PowerMask pm1_mask(int n_prb);  // levels (0, -4, -4) dB over three sub-bands
PowerMask pm2_mask(int n_prb);  // levels (0, -1, -4) dB over three sub-bands
PowerMask rb_pattern_mask();    // per-PRB repeating (0, -1, -2) dB
PowerMask custom_sfr_mask(std::vector<double> levels_db, int n_prb);

/// Parses "flat | pm1 | pm2 | rb012"; throws on anything else.
PowerMask mask_by_name(const std::string& name, int n_prb);

/// Expands an Sfr/Flat mask to per-PRB powers. The level list is rotated by
/// the sector reuse index so band r carries the 0 dB level in index r.
PrbPowerMap apply_sfr_mask(const PowerMask& mask, int sector_reuse_index,
                           double p_max_prb);

/// Repeating (0, -1, -2) dB pattern over PRBs, identical in every sector.
PrbPowerMap apply_rb_pattern(double p_max_prb, int n_prb);

/// Dispatches on mask kind; the single entry point engines should use.
PrbPowerMap prb_power_map(const PowerMask& mask, int sector_reuse_index,
                          double p_max_prb, int n_prb);

/// Within-site sector index (sectors are stored site-major).
int reuse_index_for(int sector_id);

}  // namespace ofdmasim
