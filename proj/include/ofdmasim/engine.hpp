// SPDX-License-Identifier: Apache-2.0
//
// System-level downlink simulator: drops UEs into a 19-site hexagonal
// network, runs per-TTI fading, CQI feedback, scheduling, link adaptation
// and HARQ for the three central sectors, and collects throughput,
// fairness and BLER statistics over multiple drops.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ofdmasim/link_adapt.hpp"
#include "ofdmasim/scheduler.hpp"
#include "ofdmasim/sfr.hpp"

namespace ofdmasim {

enum class AntennaMode { Simo1x2, Mimo2x2 };

AntennaMode antenna_mode_by_name(const std::string& name);
std::string antenna_mode_name(AntennaMode mode);

/// Full simulation configuration. Defaults reproduce the reference
/// 10 MHz / 50 PRB macro deployment.
struct SystemConfig {
  // radio
  int n_prb = 50;
  int subcarriers_per_prb = 12;
  double subcarrier_hz = 15e3;
  double tti_s = 1e-3;
  double total_power_dbm = 46.0;
  double carrier_hz = 2e9;
  double ue_speed_kmh = 3.0;
  double isd_m = 500.0;
  double min_dist_m = 35.0;
  double shadowing_std_db = 8.0;
  double noise_figure_db = 9.0;
  int samples_per_prb = 1;  // 1 or 3 frequency samples per PRB
  AntennaMode antenna = AntennaMode::Mimo2x2;

  // scheduler
  SchedulerParams sched;

  // link adaptation
  McsTable mcs = default_mcs_table();
  double bler_target = 0.2;
  double olla_step_up_db = 0.5;
  double olla_clamp_db = 5.0;

  // power mask
  PowerMask mask = flat_mask(50);
  std::string mask_name = "flat";

  // run
  int ues_per_cell = 15;
  int n_drops = 4;
  long n_ttis = 6000;
  long warmup_ttis = 1000;
  std::uint64_t seed = 1;

  double prb_bandwidth_hz() const { return subcarriers_per_prb * subcarrier_hz; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Per-drop outcome. UE indices are sector-major: sector = ue / ues_per_cell.
struct DropStats {
  std::vector<long> ue_bits;                // delivered in the stats window
  std::vector<double> ue_throughput_bps;
  std::array<double, 3> sector_throughput_bps{0.0, 0.0, 0.0};
  long first_tx_acks = 0;
  long first_tx_nacks = 0;
  double first_tx_bler() const;
};

/// Aggregate over drops: UE throughputs pooled, cell throughput averaged.
struct Report {
  std::vector<double> pooled_ue_tput_bps;
  double mean_cell_tput_bps = 0.0;
  double coverage_bps = 0.0;  // 5th percentile of the pooled UE throughputs
  double jain = 0.0;
  double bler = 0.0;
};

/// Optional per-TTI observers, used by tests and experiment tooling.
struct EngineHooks {
  std::function<void(long tti, int sector, const Allocation&)> on_allocation;
};

/// Jain fairness index (sum x)^2 / (n sum x^2). Throws on an empty or
/// all-zero input.
double jain_index(const std::vector<double>& x);

/// 5th-percentile throughput by the nearest-rank rule. Throws on empty input.
double coverage_percentile(std::vector<double> x);

DropStats run_drop(const SystemConfig& cfg, int drop_index,
                   const EngineHooks* hooks = nullptr);

Report aggregate(const std::vector<DropStats>& drops);

/// Runs cfg.n_drops drops with per-drop seeds derived from cfg.seed.
Report run_all(const SystemConfig& cfg, const EngineHooks* hooks = nullptr);

}  // namespace ofdmasim
