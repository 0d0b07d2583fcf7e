/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ofdmasim/channel.hpp"
#include "ofdmasim/detect.hpp"
#include "ofdmasim/geometry.hpp"
#include "ofdmasim/harq.hpp"

namespace ofdmasim {

namespace {

constexpr int kHarqDelayTtis = 2;
constexpr int kCentralSectors = 3;

// Seed stream tags, one per independent RNG consumer.
constexpr std::uint64_t kTagPlacement = 0x9E0;
constexpr std::uint64_t kTagOutcome = 0x0DD;
constexpr std::uint64_t kTagFading = 0xFA0000;

}  // namespace

AntennaMode antenna_mode_by_name(const std::string& name) {
  if (name == "1x2") return AntennaMode::Simo1x2;
  if (name == "2x2") return AntennaMode::Mimo2x2;
  throw std::invalid_argument("unknown antenna mode: " + name);
}

std::string antenna_mode_name(AntennaMode mode) {
  return mode == AntennaMode::Simo1x2 ? "1x2" : "2x2";
}

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("config: " + what);
  };
  if (n_prb < 1) fail("n_prb must be >= 1");
  if (subcarriers_per_prb < 1) fail("subcarriers_per_prb must be >= 1");
  if (subcarrier_hz <= 0.0) fail("subcarrier_hz must be positive");
  if (tti_s <= 0.0) fail("tti_s must be positive");
  if (carrier_hz <= 0.0) fail("carrier_hz must be positive");
  if (ue_speed_kmh < 0.0) fail("ue_speed_kmh must be >= 0");
  if (isd_m <= 2.0 * min_dist_m) fail("isd_m too small for min_dist_m");
  if (shadowing_std_db < 0.0) fail("shadowing_std_db must be >= 0");
  if (samples_per_prb != 1 && samples_per_prb != 3)
    fail("samples_per_prb must be 1 or 3");
  if (sched.rho <= 0.0 || sched.rho >= 1.0) fail("forgetting factor outside (0,1)");
  if (sched.max_mux_ues < 1) fail("max_mux_ues must be >= 1");
  if (sched.alpha1 < 0.0 || sched.alpha2 < 0.0) fail("alpha exponents must be >= 0");
  mcs.validate();
  if (bler_target <= 0.0 || bler_target >= 1.0) fail("bler_target outside (0,1)");
  if (olla_step_up_db <= 0.0) fail("olla_step_up_db must be positive");
  if (olla_clamp_db <= 0.0) fail("olla_clamp_db must be positive");
  if (ues_per_cell < 0) fail("ues_per_cell must be >= 0");
  if (n_drops < 1) fail("n_drops must be >= 1");
  if (warmup_ttis < 0) fail("warmup_ttis must be >= 0");
  if (n_ttis <= warmup_ttis) fail("statistics window is empty (n_ttis <= warmup_ttis)");
  // Expanding the mask validates level counts against the PRB grid.
  (void)prb_power_map(mask, 0, 1.0, n_prb);
}

double DropStats::first_tx_bler() const {
  const long total = first_tx_acks + first_tx_nacks;
  return total > 0 ? static_cast<double>(first_tx_nacks) / total : 0.0;
}

double jain_index(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("jain_index: empty input");
  double sum = 0.0, sumsq = 0.0;
  for (double v : x) {
    sum += v;
    sumsq += v * v;
  }
  if (sumsq == 0.0) throw std::invalid_argument("jain_index: all-zero input");
  return sum * sum / (static_cast<double>(x.size()) * sumsq);
}

double coverage_percentile(std::vector<double> x) {
  if (x.empty()) throw std::invalid_argument("coverage_percentile: empty input");
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  const auto rank = static_cast<std::size_t>(std::ceil(0.05 * n));
  return x[rank > 0 ? rank - 1 : 0];
}

namespace {

struct Feedback {
  int ue = -1;
  int pool = 0;
  int pid = -1;
  bool ack = false;
  bool first_tx = false;
};

struct UeState {
  UePlacement place;
  int sector = -1;          // central sector id, 0..2
  double g_serving_lin = 0.0;
  FadingLink serving;
  std::vector<FadingLink> intf;        // one per interfering site
  std::vector<double> intf_power_w;    // [site][prb], P_j*g_j with mask applied
  CqiState cqi;
  const CqiReport* cur_report = nullptr;
  long applied_gen_tti = -1;
  UeTracker tracker;
  OllaState olla;
  std::array<HarqPool, 2> pools;
  // True post-detector SINRs (linear), memoized per TTI.
  std::vector<long> stamp;
  std::vector<double> g_single, g_dual0, g_dual1;
  long delivered_today = 0;
  long window_bits = 0;

  UeState(UePlacement p, FadingLink s) : place(std::move(p)), serving(std::move(s)) {}
};

// Codeword under construction: all PRBs carried by one (UE, stream) this
// TTI, merged across spatial modes per the one-MCS-per-stream rule.
struct TxGroup {
  int ue = -1;
  int pool = 0;
  bool retx = false;
  int pid = -1;
  std::vector<int> prbs;
  std::vector<double> cqi_db;    // delayed, per PRB, from the PRB's mode plane
  std::vector<double> true_lin;  // current, per PRB, same plane
};

class Drop {
 public:
  Drop(const SystemConfig& cfg, int drop_index, const EngineHooks* hooks)
      : cfg_(cfg),
        hooks_(hooks),
        layout_(build_layout(cfg.isd_m)),
        base_seed_(mix_seed(cfg.seed, static_cast<std::uint64_t>(drop_index))),
        outcome_rng_(mix_seed(base_seed_, kTagOutcome)),
        profile_(itu_tu20()),
        n_rx_(2),
        n_tx_(cfg.antenna == AntennaMode::Mimo2x2 ? 2 : 1),
        allow_dual_(cfg.antenna == AntennaMode::Mimo2x2) {
    p_max_prb_ = dbm_to_watt(cfg.total_power_dbm) / cfg.n_prb;
    sigma_n2_ = noise_variance_w(cfg.prb_bandwidth_hz(), cfg.noise_figure_db);
    freqs_ = prb_sample_freqs(cfg.n_prb, cfg.samples_per_prb);
    mix_ = make_mix(profile_, freqs_);
    const double fd = doppler_hz(cfg.ue_speed_kmh, cfg.carrier_hz);

    for (int s = 0; s < kCentralSectors; ++s)
      serving_power_[s] = prb_power_map(cfg.mask, reuse_index_for(s), p_max_prb_, cfg.n_prb);
    std::array<std::vector<double>, 3> frac_by_reuse;
    for (int r = 0; r < 3; ++r)
      frac_by_reuse[r] = prb_power_map(cfg.mask, r, 1.0, cfg.n_prb).fraction;

    Rng placement_rng(mix_seed(base_seed_, kTagPlacement));
    std::vector<UePlacement> placements = drop_ues(
        layout_, cfg.ues_per_cell, placement_rng, cfg.min_dist_m, cfg.shadowing_std_db);

    const int n_intf_sites = layout_.n_sites() - 1;
    ues_.reserve(placements.size());
    for (std::size_t u = 0; u < placements.size(); ++u) {
      Rng link_rng(mix_seed(base_seed_, kTagFading + u * 64));
      UeState ue(std::move(placements[u]),
                 FadingLink(n_rx_ * n_tx_, profile_, fd, link_rng));
      ue.sector = ue.place.serving_sector;
      const Eigen::VectorXd total_db = ue.place.gains.total_db();
      ue.g_serving_lin = db_to_lin(total_db[ue.sector]);
      ue.intf.reserve(n_intf_sites);
      ue.intf_power_w.assign(static_cast<std::size_t>(n_intf_sites) * cfg.n_prb, 0.0);
      for (int j = 0; j < n_intf_sites; ++j) {
        Rng site_rng(mix_seed(base_seed_, kTagFading + u * 64 + 1 + j));
        ue.intf.emplace_back(n_rx_, profile_, fd, site_rng);
        for (int prb = 0; prb < cfg.n_prb; ++prb) {
          double w = 0.0;
          for (int r = 0; r < 3; ++r) {
            const int sector_id = 3 * (j + 1) + r;
            w += db_to_lin(total_db[sector_id]) * frac_by_reuse[r][prb];
          }
          ue.intf_power_w[static_cast<std::size_t>(j) * cfg.n_prb + prb] = p_max_prb_ * w;
        }
      }
      ue.olla = make_olla(cfg.olla_step_up_db, cfg.bler_target, cfg.olla_clamp_db);
      ue.stamp.assign(cfg.n_prb, -1);
      ue.g_single.assign(cfg.n_prb, 0.0);
      ue.g_dual0.assign(cfg.n_prb, 0.0);
      ue.g_dual1.assign(cfg.n_prb, 0.0);
      ues_.push_back(std::move(ue));
    }
    ring_.resize(kHarqDelayTtis + 2);
  }

  DropStats run() {
    for (long tti = 0; tti < cfg_.n_ttis; ++tti) step(tti);
    DropStats out;
    const double window_s = static_cast<double>(cfg_.n_ttis - cfg_.warmup_ttis) * cfg_.tti_s;
    out.ue_bits.reserve(ues_.size());
    out.ue_throughput_bps.reserve(ues_.size());
    for (const UeState& u : ues_) {
      out.ue_bits.push_back(u.window_bits);
      const double tput = static_cast<double>(u.window_bits) / window_s;
      out.ue_throughput_bps.push_back(tput);
      out.sector_throughput_bps[u.sector] += tput;
    }
    out.first_tx_acks = acks_;
    out.first_tx_nacks = nacks_;
    return out;
  }

 private:
  void step(long tti) {
    if (tti > 0)
      for (UeState& u : ues_) {
        u.serving.advance(cfg_.tti_s);
        for (FadingLink& l : u.intf) l.advance(cfg_.tti_s);
      }

    if (cqi_due(tti)) generate_cqi(tti);
    for (UeState& u : ues_) {
      u.cur_report = u.cqi.at(tti);
      if (u.cur_report && u.cur_report->generated_tti != u.applied_gen_tti) {
        u.applied_gen_tti = u.cur_report->generated_tti;
        u.tracker.cqi_avg_lin = report_mean_lin(*u.cur_report);
      }
    }

    process_feedback(tti);

    std::array<Allocation, kCentralSectors> alloc;
    for (int s = 0; s < kCentralSectors; ++s) {
      alloc[s] = schedule_sector(s);
      if (hooks_ && hooks_->on_allocation) hooks_->on_allocation(tti, s, alloc[s]);
    }
    for (int s = 0; s < kCentralSectors; ++s) transmit(alloc[s], tti);

    for (int s = 0; s < kCentralSectors; ++s) {
      double mean = 0.0;
      if (!alloc[s].td_ranked.empty()) {
        long sum = 0;
        for (int ue : alloc[s].td_ranked) sum += ues_[ue].delivered_today;
        mean = static_cast<double>(sum) / alloc[s].td_ranked.size();
      }
      update_cell_tracker(cells_[s], mean, cfg_.sched.rho);
    }
    for (UeState& u : ues_) {
      update_ue_tracker(u.tracker, u.delivered_today, cfg_.sched.rho);
      u.delivered_today = 0;
    }
  }

  double report_mean_lin(const CqiReport& r) const {
    double sum = 0.0;
    std::size_t n = 0;
    auto add = [&](const std::vector<double>& plane) {
      for (double db : plane) sum += db_to_lin(db);
      n += plane.size();
    };
    add(r.single_db);
    if (allow_dual_)
      for (int s = 0; s < 2; ++s) {
        add(r.su_db[s]);
        add(r.mu_db[s]);
      }
    return n > 0 ? sum / static_cast<double>(n) : 1.0;
  }

  // Mixes the serving and interfering links at one sample column and runs
  // the detectors for every spatial mode. Results land in the per-UE memo.
  void compute_sinr(UeState& u, int prb) {
    double acc_single = 0.0, acc_d0 = 0.0, acc_d1 = 0.0;
    const int spp = cfg_.samples_per_prb;
    for (int s = 0; s < spp; ++s) {
      const int col = prb * spp + s;
      std::array<std::complex<double>, 4> hv{};
      u.serving.mix_col(mix_, col, hv.data());

      Mat2cd sz = Mat2cd::Zero();
      std::array<std::complex<double>, 2> hi{};
      for (std::size_t j = 0; j < u.intf.size(); ++j) {
        u.intf[j].mix_col(mix_, col, hi.data());
        const double w = u.intf_power_w[j * cfg_.n_prb + prb];
        sz(0, 0) += w * std::norm(hi[0]);
        sz(1, 1) += w * std::norm(hi[1]);
        const std::complex<double> cross = w * (hi[0] * std::conj(hi[1]));
        sz(0, 1) += cross;
        sz(1, 0) += std::conj(cross);
      }
      const Mat2cd sn = noise_cov(sigma_n2_);
      const double frac = serving_power_[u.sector].fraction[prb];
      const TxPowerSpec tx{p_max_prb_ * u.g_serving_lin, frac, false};

      if (!allow_dual_) {
        Vec2cd h;
        h << hv[0], hv[1];
        acc_single += sinr_single(mrc_weights(h), h, tx, sn, sz);
      } else {
        Mat2cd ch;  // pair index rx*2+tx
        ch << hv[0], hv[1], hv[2], hv[3];
        const Vec2cd h0 = ch.col(0);
        acc_single += sinr_single(lmmse_single(h0, tx, sn, sz), h0, tx, sn, sz);
        const TxPowerSpec txd{tx.sigma_x2, tx.sigma_c2, true};
        const Mat2cd w = lmmse_dual(ch, txd, sn, sz);
        const std::array<double, 2> g = sinr_dual(w, ch, txd, sn, sz);
        acc_d0 += g[0];
        acc_d1 += g[1];
      }
    }
    u.g_single[prb] = acc_single / spp;
    u.g_dual0[prb] = acc_d0 / spp;
    u.g_dual1[prb] = acc_d1 / spp;
  }

  void ensure_sinr(UeState& u, int prb, long tti) {
    if (u.stamp[prb] == tti) return;
    compute_sinr(u, prb);
    u.stamp[prb] = tti;
  }

  void generate_cqi(long tti) {
    std::vector<double> single(cfg_.n_prb);
    std::array<std::vector<double>, 2> su, mu;
    for (UeState& u : ues_) {
      for (int prb = 0; prb < cfg_.n_prb; ++prb) {
        ensure_sinr(u, prb, tti);
        single[prb] = lin_to_db(u.g_single[prb]);
      }
      if (allow_dual_) {
        for (int s = 0; s < 2; ++s) {
          su[s].resize(cfg_.n_prb);
          mu[s].resize(cfg_.n_prb);
        }
        for (int prb = 0; prb < cfg_.n_prb; ++prb) {
          su[0][prb] = lin_to_db(u.g_dual0[prb]);
          su[1][prb] = lin_to_db(u.g_dual1[prb]);
          // A UE measures MU-dual exactly as SU-dual on its own channel.
          mu[0][prb] = su[0][prb];
          mu[1][prb] = su[1][prb];
        }
      }
      auto report = measure_cqi(tti, single, su, mu);
      if (report) u.cqi.submit(std::move(*report));
    }
  }

  void process_feedback(long tti) {
    std::vector<Feedback>& slot = ring_[tti % ring_.size()];
    for (const Feedback& ev : slot) {
      UeState& u = ues_[ev.ue];
      const HarqPool::FeedbackResult r = u.pools[ev.pool].on_feedback(ev.pid, ev.ack);
      if (r.delivered) {
        u.delivered_today += r.bits;
        u.tracker.total_delivered_bits += r.bits;
        if (tti >= cfg_.warmup_ttis) u.window_bits += r.bits;
      }
      if (ev.first_tx) {
        olla_update(u.olla, ev.ack);
        if (tti >= cfg_.warmup_ttis) ev.ack ? ++acks_ : ++nacks_;
      }
    }
    slot.clear();
  }

  Allocation schedule_sector(int sector) {
    std::vector<UeSchedInput> inputs;
    std::vector<RetxRequest> retx;
    for (std::size_t gid = 0; gid < ues_.size(); ++gid) {
      UeState& u = ues_[gid];
      if (u.sector != sector || !u.cur_report) continue;
      UeSchedInput in;
      in.ue = static_cast<int>(gid);
      in.t_i = u.tracker.t_i;
      in.cqi_avg_lin = u.tracker.cqi_avg_lin;
      in.olla_offset_db = u.olla.offset_db;
      in.cqi = u.cur_report;
      in.can_new = {u.pools[0].has_idle(), u.pools[1].has_idle()};
      inputs.push_back(in);
      for (int pool = 0; pool < 2; ++pool)
        for (int pid : u.pools[pool].pending_retransmissions()) {
          const HarqProcess& p = u.pools[pool].process(pid);
          retx.push_back({static_cast<int>(gid), pool, pid, p.n_prb, p.mcs,
                          p.first_tx_tti});
        }
    }
    std::sort(retx.begin(), retx.end(), [](const RetxRequest& a, const RetxRequest& b) {
      return std::tie(a.first_tx_tti, a.ue, a.stream, a.pid) <
             std::tie(b.first_tx_tti, b.ue, b.stream, b.pid);
    });
    return fd_sd_allocate(inputs, cells_[sector].t_tot, cfg_.mcs,
                          serving_power_[sector], allow_dual_, retx, cfg_.sched);
  }

  // Highest MCS whose delayed-CQI EESM clears the decision threshold at the
  // UE's OLLA offset; the floor scheme transmits even when none does.
  int choose_mcs(const std::vector<double>& cqi_db, double olla_offset_db) const {
    std::vector<double> lin(cqi_db.size());
    double max_db = cqi_db[0];
    for (std::size_t i = 0; i < cqi_db.size(); ++i) {
      lin[i] = db_to_lin(cqi_db[i]);
      max_db = std::max(max_db, cqi_db[i]);
    }
    for (int m = cfg_.mcs.size() - 1; m > 0; --m) {
      const double thr = cfg_.mcs[m].decision_threshold_db();
      if (max_db - olla_offset_db < thr) continue;  // EESM never exceeds the max
      const double eff_db = lin_to_db(eesm(lin, cfg_.mcs[m].beta));
      if (eff_db - olla_offset_db >= thr) return m;
    }
    return 0;
  }

  void transmit(const Allocation& alloc, long tti) {
    std::vector<TxGroup> groups;
    auto group_of = [&](int ue, int pool, bool retx, int pid) -> TxGroup& {
      for (TxGroup& g : groups)
        if (g.ue == ue && g.pool == pool && g.retx == retx && g.pid == pid) return g;
      groups.push_back({ue, pool, retx, pid, {}, {}, {}});
      return groups.back();
    };
    auto push = [&](TxGroup& g, int prb, double cqi_db, double true_lin) {
      g.prbs.push_back(prb);
      g.cqi_db.push_back(cqi_db);
      g.true_lin.push_back(true_lin);
    };

    for (int prb = 0; prb < cfg_.n_prb; ++prb) {
      const PrbAssignment& slot = alloc.prbs[prb];
      if (!slot.used()) continue;
      if (slot.retx) {
        UeState& u = ues_[slot.ue[0]];
        ensure_sinr(u, prb, tti);
        // Retransmissions go out single-stream at full PRB power.
        push(group_of(slot.ue[0], slot.retx_stream, true, slot.retx_pid), prb,
             u.cur_report->single_db[prb], u.g_single[prb]);
        continue;
      }
      switch (slot.mode) {
        case TxMode::Single: {
          UeState& u = ues_[slot.ue[0]];
          ensure_sinr(u, prb, tti);
          push(group_of(slot.ue[0], 0, false, -1), prb,
               u.cur_report->single_db[prb], u.g_single[prb]);
          break;
        }
        case TxMode::SuDual: {
          UeState& u = ues_[slot.ue[0]];
          ensure_sinr(u, prb, tti);
          push(group_of(slot.ue[0], 0, false, -1), prb, u.cur_report->su_db[0][prb],
               u.g_dual0[prb]);
          push(group_of(slot.ue[0], 1, false, -1), prb, u.cur_report->su_db[1][prb],
               u.g_dual1[prb]);
          break;
        }
        case TxMode::MuDual: {
          UeState& a = ues_[slot.ue[0]];
          UeState& b = ues_[slot.ue[1]];
          ensure_sinr(a, prb, tti);
          ensure_sinr(b, prb, tti);
          push(group_of(slot.ue[0], 0, false, -1), prb, a.cur_report->mu_db[0][prb],
               a.g_dual0[prb]);
          push(group_of(slot.ue[1], 1, false, -1), prb, b.cur_report->mu_db[1][prb],
               b.g_dual1[prb]);
          break;
        }
      }
    }

    for (TxGroup& g : groups) {
      UeState& u = ues_[g.ue];
      HarqPool& pool = u.pools[g.pool];
      const int n = static_cast<int>(g.prbs.size());
      bool ack = false;
      int pid = -1;
      bool first = false;
      if (g.retx) {
        pid = g.pid;
        const McsEntry& m = cfg_.mcs[pool.process(pid).mcs];
        pool.retransmit(pid, eesm(g.true_lin, m.beta));
        const double acc_db = lin_to_db(pool.process(pid).accumulated_sinr);
        ack = outcome_rng_.u01() >= blep(m, acc_db);
      } else {
        const int mcs = choose_mcs(g.cqi_db, u.olla.offset_db);
        const McsEntry& m = cfg_.mcs[mcs];
        const double eff_lin = eesm(g.true_lin, m.beta);
        pid = pool.start_transmission(estimate_rate(m, n), mcs, n, eff_lin, tti);
        ack = outcome_rng_.u01() >= blep(m, lin_to_db(eff_lin));
        first = true;
      }
      ring_[(tti + kHarqDelayTtis) % ring_.size()].push_back(
          {g.ue, g.pool, pid, ack, first});
    }
  }

  const SystemConfig& cfg_;
  const EngineHooks* hooks_;
  CellLayout layout_;
  std::uint64_t base_seed_;
  Rng outcome_rng_;
  TapProfile profile_;
  int n_rx_, n_tx_;
  bool allow_dual_;
  double p_max_prb_ = 0.0;
  double sigma_n2_ = 0.0;
  std::vector<double> freqs_;
  Eigen::MatrixXcd mix_;
  std::array<PrbPowerMap, kCentralSectors> serving_power_;
  std::vector<UeState> ues_;
  std::array<CellTracker, kCentralSectors> cells_{};
  std::vector<std::vector<Feedback>> ring_;
  long acks_ = 0;
  long nacks_ = 0;
};

}  // namespace

DropStats run_drop(const SystemConfig& cfg, int drop_index, const EngineHooks* hooks) {
  cfg.validate();
  Drop drop(cfg, drop_index, hooks);
  return drop.run();
}

Report aggregate(const std::vector<DropStats>& drops) {
  Report rep;
  if (drops.empty()) return rep;
  double cell_sum = 0.0;
  long acks = 0, nacks = 0;
  for (const DropStats& d : drops) {
    rep.pooled_ue_tput_bps.insert(rep.pooled_ue_tput_bps.end(),
                                  d.ue_throughput_bps.begin(),
                                  d.ue_throughput_bps.end());
    cell_sum += (d.sector_throughput_bps[0] + d.sector_throughput_bps[1] +
                 d.sector_throughput_bps[2]) /
                kCentralSectors;
    acks += d.first_tx_acks;
    nacks += d.first_tx_nacks;
  }
  rep.mean_cell_tput_bps = cell_sum / static_cast<double>(drops.size());
  rep.bler = (acks + nacks) > 0 ? static_cast<double>(nacks) / (acks + nacks) : 0.0;
  if (!rep.pooled_ue_tput_bps.empty()) {
    rep.coverage_bps = coverage_percentile(rep.pooled_ue_tput_bps);
    bool any = false;
    for (double v : rep.pooled_ue_tput_bps) any = any || v > 0.0;
    rep.jain = any ? jain_index(rep.pooled_ue_tput_bps) : 0.0;
  }
  return rep;
}

Report run_all(const SystemConfig& cfg, const EngineHooks* hooks) {
  cfg.validate();
  std::vector<DropStats> drops;
  drops.reserve(cfg.n_drops);
  for (int d = 0; d < cfg.n_drops; ++d) drops.push_back(run_drop(cfg, d, hooks));
  return aggregate(drops);
}

}  // namespace ofdmasim
