/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ofdmasim/channel.hpp"
#include "ofdmasim/detect.hpp"
#include "ofdmasim/link_adapt.hpp"
#include "ofdmasim/sfr.hpp"

namespace ofdmasim {

enum class SchedAlgo { PF, PPF, MMPF, MPMPF };

SchedAlgo sched_algo_by_name(const std::string& name);
std::string sched_algo_name(SchedAlgo algo);

/// Exponent presets: m1 = (1,1), m2 = (2,1), m3 = (4,1).
std::pair<double, double> alpha_preset(const std::string& name);

struct SchedulerParams {
  SchedAlgo algo = SchedAlgo::MPMPF;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  int max_mux_ues = 10;
  double rho = 0.002;  // throughput forgetting factor
};

/// Per-UE running state. t_i starts at one lowest-MCS PRB per TTI so fresh
/// UEs rank high without dividing by zero.
struct UeTracker {
  double t_i = 112.0;          // bits per TTI, exponentially averaged
  double cqi_avg_lin = 1.0;    // mean linear SINR over the applied report
  long total_delivered_bits = 0;
};

struct CellTracker {
  double t_tot = 112.0;
};

/// T <- (1-rho)*T + rho*delivered, every TTI, zero when idle.
void update_ue_tracker(UeTracker& tracker, long delivered_bits, double rho);
void update_cell_tracker(CellTracker& tracker, double mean_delivered_td_bits,
                         double rho);

// Scheduling metrics. Inputs are linear; throughputs in bits/TTI.
double metric_pf(double r, double t_i);
double metric_ppf(double p_ks, double p_max, double r, double t_i);
double metric_mmpf(double cqi, double cqi_avg, double t_i, double t_tot,
                   double alpha1, double alpha2);
double metric_mpmpf(double p_ks, double p_max, double cqi, double cqi_avg,
                    double t_i, double t_tot, double alpha1, double alpha2);

/// Scheduler-visible view of one UE at one TTI.
struct UeSchedInput {
  int ue = -1;
  double t_i = 112.0;
  double cqi_avg_lin = 1.0;
  double olla_offset_db = 0.0;
  const CqiReport* cqi = nullptr;  // delayed applied report; null = skip
  // Per-stream HARQ capacity; a stream with no idle process cannot carry
  // new data this TTI (retransmissions reuse their slot and are exempt).
  std::array<bool, 2> can_new{true, true};
};

/// A HARQ retransmission wanting PRBs this TTI. Single-stream by contract;
/// keeps its original MCS and PRB count.
struct RetxRequest {
  int ue = -1;
  int stream = 0;   // HARQ pool the process lives in
  int pid = -1;
  int n_prb = 0;
  int mcs = 0;
  long first_tx_tti = -1;
};

struct PrbAssignment {
  TxMode mode = TxMode::Single;
  std::array<int, 2> ue{-1, -1};  // per-stream owner; dual SU repeats the id
  bool retx = false;
  int retx_stream = 0;
  int retx_pid = -1;
  double metric = 0.0;

  bool used() const { return ue[0] >= 0; }
};

struct Allocation {
  std::vector<PrbAssignment> prbs;
  std::vector<int> td_ranked;  // TD-selected UEs, best metric first
};

/// Metric of one (UE, PRB, stream) candidate under a spatial mode. The CQI
/// value comes from the mode's report plane; dual modes halve the power
/// share. PF-family rates come from select_mcs at the UE's OLLA offset.
double stream_metric(const SchedulerParams& params, const UeSchedInput& ue,
                     double t_tot, const McsTable& mcs,
                     double prb_fraction, TxMode mode, int stream, int prb);

/// Full-band TD metric: the configured metric evaluated on whole-band
/// aggregates (summed rate, mean CQI, mean power share), best spatial mode.
double td_metric(const SchedulerParams& params, const UeSchedInput& ue,
                 double t_tot, const McsTable& mcs, const PrbPowerMap& power,
                 bool allow_dual);

/// Top max_mux_ues UEs by td_metric, ties to the lower id.
std::vector<int> td_rank(const std::vector<UeSchedInput>& ues, double t_tot,
                         const McsTable& mcs, const PrbPowerMap& power,
                         bool allow_dual, const SchedulerParams& params);

/// Retransmissions first (each takes its UE's best single-stream PRBs, in
/// list order, deferred when short of room), then greedy per-PRB argmax
/// over single / SU-dual / MU-dual candidates among the TD-ranked UEs.
Allocation fd_sd_allocate(const std::vector<UeSchedInput>& ues, double t_tot,
                          const McsTable& mcs, const PrbPowerMap& power,
                          bool allow_dual, const std::vector<RetxRequest>& retx,
                          const SchedulerParams& params);

}  // namespace ofdmasim
