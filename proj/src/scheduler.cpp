/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ofdmasim {

namespace {

/// pow with fast paths for the preset exponents.
double ipow(double x, double a) {
  if (a == 0.0) return 1.0;
  if (a == 1.0) return x;
  if (a == 2.0) return x * x;
  if (a == 4.0) {
    const double y = x * x;
    return y * y;
  }
  return std::pow(x, a);
}

double rate_estimate(double cqi_db, double olla_offset_db, const McsTable& mcs) {
  const auto sel = select_mcs(cqi_db, olla_offset_db, mcs);
  // Below the lowest threshold the UE still transmits at the lowest MCS.
  const int m = sel ? *sel : 0;
  return static_cast<double>(estimate_rate(mcs[m], 1));
}

double mode_cqi_db(const CqiReport& r, TxMode mode, int stream, int prb) {
  switch (mode) {
    case TxMode::Single:
      return r.single_db[prb];
    case TxMode::SuDual:
      return r.su_db[stream][prb];
    case TxMode::MuDual:
      return r.mu_db[stream][prb];
  }
  throw std::logic_error("mode_cqi_db: bad mode");
}

}  // namespace

SchedAlgo sched_algo_by_name(const std::string& name) {
  if (name == "pf") return SchedAlgo::PF;
  if (name == "ppf") return SchedAlgo::PPF;
  if (name == "mmpf") return SchedAlgo::MMPF;
  if (name == "mpmpf") return SchedAlgo::MPMPF;
  throw std::invalid_argument("unknown scheduler: " + name);
}

std::string sched_algo_name(SchedAlgo algo) {
  switch (algo) {
    case SchedAlgo::PF:
      return "pf";
    case SchedAlgo::PPF:
      return "ppf";
    case SchedAlgo::MMPF:
      return "mmpf";
    case SchedAlgo::MPMPF:
      return "mpmpf";
  }
  throw std::logic_error("sched_algo_name: bad algo");
}

std::pair<double, double> alpha_preset(const std::string& name) {
  if (name == "m1") return {1.0, 1.0};
  if (name == "m2") return {2.0, 1.0};
  if (name == "m3") return {4.0, 1.0};
  throw std::invalid_argument("unknown alpha preset: " + name);
}

void update_ue_tracker(UeTracker& tracker, long delivered_bits, double rho) {
  if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("tracker: rho out of (0,1)");
  tracker.t_i = (1.0 - rho) * tracker.t_i + rho * static_cast<double>(delivered_bits);
  tracker.total_delivered_bits += delivered_bits;
}

void update_cell_tracker(CellTracker& tracker, double mean_delivered_td_bits,
                         double rho) {
  if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("tracker: rho out of (0,1)");
  tracker.t_tot = (1.0 - rho) * tracker.t_tot + rho * mean_delivered_td_bits;
}

double metric_pf(double r, double t_i) {
  if (t_i <= 0.0) throw std::invalid_argument("metric_pf: nonpositive average throughput");
  return r / t_i;
}

double metric_ppf(double p_ks, double p_max, double r, double t_i) {
  if (p_ks <= 0.0 || p_ks > p_max) throw std::invalid_argument("metric_ppf: power out of range");
  return (p_ks / p_max) * metric_pf(r, t_i);
}

double metric_mmpf(double cqi, double cqi_avg, double t_i, double t_tot,
                   double alpha1, double alpha2) {
  if (cqi <= 0.0 || cqi_avg <= 0.0 || t_i <= 0.0 || t_tot <= 0.0) {
    throw std::invalid_argument("metric_mmpf: nonpositive input");
  }
  return ipow(cqi / cqi_avg, alpha1) * ipow(t_tot / t_i, alpha2);
}

double metric_mpmpf(double p_ks, double p_max, double cqi, double cqi_avg,
                    double t_i, double t_tot, double alpha1, double alpha2) {
  if (p_ks <= 0.0 || p_ks > p_max) throw std::invalid_argument("metric_mpmpf: power out of range");
  return (p_ks / p_max) * metric_mmpf(cqi, cqi_avg, t_i, t_tot, alpha1, alpha2);
}

double stream_metric(const SchedulerParams& params, const UeSchedInput& ue,
                     double t_tot, const McsTable& mcs, double prb_fraction,
                     TxMode mode, int stream, int prb) {
  const double split = (mode == TxMode::Single) ? 1.0 : 0.5;
  const double p_ratio = prb_fraction * split;
  const double cqi_db = mode_cqi_db(*ue.cqi, mode, stream, prb);
  switch (params.algo) {
    case SchedAlgo::PF:
      return metric_pf(rate_estimate(cqi_db, ue.olla_offset_db, mcs), ue.t_i);
    case SchedAlgo::PPF:
      return metric_ppf(p_ratio, 1.0, rate_estimate(cqi_db, ue.olla_offset_db, mcs),
                        ue.t_i);
    case SchedAlgo::MMPF:
      return metric_mmpf(db_to_lin(cqi_db), ue.cqi_avg_lin, ue.t_i, t_tot,
                         params.alpha1, params.alpha2);
    case SchedAlgo::MPMPF:
      return metric_mpmpf(p_ratio, 1.0, db_to_lin(cqi_db), ue.cqi_avg_lin, ue.t_i,
                          t_tot, params.alpha1, params.alpha2);
  }
  throw std::logic_error("stream_metric: bad algorithm");
}

namespace {

struct BandAggregate {
  double rate_sum = 0.0;
  double cqi_mean_lin = 0.0;
  double p_mean = 0.0;
};

double aggregate_metric(const SchedulerParams& params, const UeSchedInput& ue,
                        double t_tot, const BandAggregate& agg) {
  switch (params.algo) {
    case SchedAlgo::PF:
      return metric_pf(agg.rate_sum, ue.t_i);
    case SchedAlgo::PPF:
      return metric_ppf(agg.p_mean, 1.0, agg.rate_sum, ue.t_i);
    case SchedAlgo::MMPF:
      return metric_mmpf(agg.cqi_mean_lin, ue.cqi_avg_lin, ue.t_i, t_tot,
                         params.alpha1, params.alpha2);
    case SchedAlgo::MPMPF:
      return metric_mpmpf(agg.p_mean, 1.0, agg.cqi_mean_lin, ue.cqi_avg_lin,
                          ue.t_i, t_tot, params.alpha1, params.alpha2);
  }
  throw std::logic_error("aggregate_metric: bad algorithm");
}

}  // namespace

double td_metric(const SchedulerParams& params, const UeSchedInput& ue,
                 double t_tot, const McsTable& mcs, const PrbPowerMap& power,
                 bool allow_dual) {
  const CqiReport& r = *ue.cqi;
  const int n = power.n_prb();

  BandAggregate single;
  for (int prb = 0; prb < n; ++prb) {
    single.rate_sum += rate_estimate(r.single_db[prb], ue.olla_offset_db, mcs);
    single.cqi_mean_lin += db_to_lin(r.single_db[prb]);
    single.p_mean += power.fraction[prb];
  }
  single.cqi_mean_lin /= n;
  single.p_mean /= n;
  double best = aggregate_metric(params, ue, t_tot, single);
  if (!allow_dual) return best;

  BandAggregate su;
  for (int prb = 0; prb < n; ++prb) {
    for (int s = 0; s < 2; ++s) {
      su.rate_sum += rate_estimate(r.su_db[s][prb], ue.olla_offset_db, mcs);
      su.cqi_mean_lin += db_to_lin(r.su_db[s][prb]);
    }
    su.p_mean += 0.5 * power.fraction[prb];
  }
  su.cqi_mean_lin /= 2 * n;
  su.p_mean /= n;
  best = std::max(best, aggregate_metric(params, ue, t_tot, su));

  // In MU mode the UE owns one stream; rank it on its better stream.
  for (int s = 0; s < 2; ++s) {
    BandAggregate mu;
    for (int prb = 0; prb < n; ++prb) {
      mu.rate_sum += rate_estimate(r.mu_db[s][prb], ue.olla_offset_db, mcs);
      mu.cqi_mean_lin += db_to_lin(r.mu_db[s][prb]);
      mu.p_mean += 0.5 * power.fraction[prb];
    }
    mu.cqi_mean_lin /= n;
    mu.p_mean /= n;
    best = std::max(best, aggregate_metric(params, ue, t_tot, mu));
  }
  return best;
}

std::vector<int> td_rank(const std::vector<UeSchedInput>& ues, double t_tot,
                         const McsTable& mcs, const PrbPowerMap& power,
                         bool allow_dual, const SchedulerParams& params) {
  struct Scored {
    int ue;
    double metric;
  };
  std::vector<Scored> scored;
  for (const UeSchedInput& u : ues) {
    if (!u.cqi) continue;
    scored.push_back({u.ue, td_metric(params, u, t_tot, mcs, power, allow_dual)});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.metric != b.metric) return a.metric > b.metric;
    return a.ue < b.ue;
  });
  if (static_cast<int>(scored.size()) > params.max_mux_ues) {
    scored.resize(params.max_mux_ues);
  }
  std::vector<int> out;
  out.reserve(scored.size());
  for (const Scored& s : scored) out.push_back(s.ue);
  return out;
}

Allocation fd_sd_allocate(const std::vector<UeSchedInput>& ues, double t_tot,
                          const McsTable& mcs, const PrbPowerMap& power,
                          bool allow_dual, const std::vector<RetxRequest>& retx,
                          const SchedulerParams& params) {
  const int n_prb = power.n_prb();
  Allocation alloc;
  alloc.prbs.resize(n_prb);
  alloc.td_ranked = td_rank(ues, t_tot, mcs, power, allow_dual, params);

  auto input_of = [&ues](int ue) -> const UeSchedInput* {
    for (const UeSchedInput& u : ues) {
      if (u.ue == ue) return &u;
    }
    return nullptr;
  };

  // Retransmissions claim PRBs first, single-stream, best PRBs for that UE.
  for (const RetxRequest& rx : retx) {
    const UeSchedInput* u = input_of(rx.ue);
    if (!u || !u->cqi) continue;
    struct PrbScore {
      int prb;
      double metric;
    };
    std::vector<PrbScore> free;
    for (int prb = 0; prb < n_prb; ++prb) {
      if (alloc.prbs[prb].used()) continue;
      free.push_back({prb, stream_metric(params, *u, t_tot, mcs,
                                         power.fraction[prb], TxMode::Single, 0,
                                         prb)});
    }
    if (static_cast<int>(free.size()) < rx.n_prb) continue;  // deferred
    std::sort(free.begin(), free.end(), [](const PrbScore& a, const PrbScore& b) {
      if (a.metric != b.metric) return a.metric > b.metric;
      return a.prb < b.prb;
    });
    for (int i = 0; i < rx.n_prb; ++i) {
      PrbAssignment& slot = alloc.prbs[free[i].prb];
      slot.mode = TxMode::Single;
      slot.ue = {rx.ue, -1};
      slot.retx = true;
      slot.retx_stream = rx.stream;
      slot.retx_pid = rx.pid;
      slot.metric = free[i].metric;
    }
  }

  // Candidate set for new data: the TD-ranked UEs, ascending id for ties.
  std::vector<const UeSchedInput*> cand;
  for (int ue : alloc.td_ranked) {
    if (const UeSchedInput* u = input_of(ue)) cand.push_back(u);
  }
  std::sort(cand.begin(), cand.end(),
            [](const UeSchedInput* a, const UeSchedInput* b) { return a->ue < b->ue; });
  if (cand.empty()) return alloc;

  const int nc = static_cast<int>(cand.size());
  std::vector<double> m_single(nc), m_su0(nc), m_su1(nc), m_mu0(nc), m_mu1(nc);
  for (int prb = 0; prb < n_prb; ++prb) {
    PrbAssignment& slot = alloc.prbs[prb];
    if (slot.used()) continue;
    const double frac = power.fraction[prb];
    for (int c = 0; c < nc; ++c) {
      const UeSchedInput& u = *cand[c];
      m_single[c] = stream_metric(params, u, t_tot, mcs, frac, TxMode::Single, 0, prb);
      if (allow_dual) {
        m_su0[c] = stream_metric(params, u, t_tot, mcs, frac, TxMode::SuDual, 0, prb);
        m_su1[c] = stream_metric(params, u, t_tot, mcs, frac, TxMode::SuDual, 1, prb);
        m_mu0[c] = stream_metric(params, u, t_tot, mcs, frac, TxMode::MuDual, 0, prb);
        m_mu1[c] = stream_metric(params, u, t_tot, mcs, frac, TxMode::MuDual, 1, prb);
      }
    }

    double best = -1.0;
    TxMode best_mode = TxMode::Single;
    int best0 = -1, best1 = -1;
    for (int c = 0; c < nc; ++c) {
      if (!cand[c]->can_new[0]) continue;
      if (m_single[c] > best) {
        best = m_single[c];
        best_mode = TxMode::Single;
        best0 = cand[c]->ue;
        best1 = -1;
      }
    }
    if (allow_dual) {
      for (int c = 0; c < nc; ++c) {
        if (!cand[c]->can_new[0] || !cand[c]->can_new[1]) continue;
        const double su = m_su0[c] + m_su1[c];
        if (su > best) {
          best = su;
          best_mode = TxMode::SuDual;
          best0 = cand[c]->ue;
          best1 = cand[c]->ue;
        }
      }
      for (int a = 0; a < nc; ++a) {
        if (!cand[a]->can_new[0]) continue;
        for (int b = 0; b < nc; ++b) {
          if (b == a || !cand[b]->can_new[1]) continue;
          const double mu = m_mu0[a] + m_mu1[b];
          if (mu > best) {
            best = mu;
            best_mode = TxMode::MuDual;
            best0 = cand[a]->ue;
            best1 = cand[b]->ue;
          }
        }
      }
    }
    if (best0 >= 0) {
      slot.mode = best_mode;
      slot.ue = {best0, best1};
      slot.metric = best;
    }
  }
  return alloc;
}

}  // namespace ofdmasim
