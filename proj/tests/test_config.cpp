/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

using namespace ofdmasim;

namespace {

bool mentions(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

#define CHECK_FAILS_WITH(expr, needle)            \
  do {                                            \
    try {                                         \
      (void)(expr);                               \
      FAIL("expected an exception");              \
    } catch (const std::exception& e) {           \
      CHECK_MESSAGE(mentions(e, needle), e.what()); \
    }                                             \
  } while (0)

}  // namespace

TEST_CASE("empty config yields the full default parameter set") {
  const SystemConfig cfg = parse_config_text("");
  CHECK(cfg.n_prb == 50);
  CHECK(cfg.subcarriers_per_prb == 12);
  CHECK(cfg.subcarrier_hz == doctest::Approx(15e3));
  CHECK(cfg.tti_s == doctest::Approx(1e-3));
  CHECK(cfg.total_power_dbm == doctest::Approx(46.0));
  CHECK(cfg.carrier_hz == doctest::Approx(2e9));
  CHECK(cfg.ue_speed_kmh == doctest::Approx(3.0));
  CHECK(cfg.isd_m == doctest::Approx(500.0));
  CHECK(cfg.min_dist_m == doctest::Approx(35.0));
  CHECK(cfg.shadowing_std_db == doctest::Approx(8.0));
  CHECK(cfg.noise_figure_db == doctest::Approx(9.0));
  CHECK(cfg.samples_per_prb == 1);
  CHECK(cfg.antenna == AntennaMode::Mimo2x2);
  CHECK(cfg.sched.algo == SchedAlgo::MPMPF);
  CHECK(cfg.sched.alpha1 == doctest::Approx(1.0));
  CHECK(cfg.sched.alpha2 == doctest::Approx(1.0));
  CHECK(cfg.sched.max_mux_ues == 10);
  CHECK(cfg.sched.rho == doctest::Approx(0.002));
  CHECK(cfg.mask_name == "flat");
  CHECK(cfg.mcs.size() == 9);
  CHECK(cfg.bler_target == doctest::Approx(0.2));
  CHECK(cfg.olla_step_up_db == doctest::Approx(0.5));
  CHECK(cfg.olla_clamp_db == doctest::Approx(5.0));
  CHECK(cfg.ues_per_cell == 15);
  CHECK(cfg.n_drops == 4);
  CHECK(cfg.n_ttis == 6000);
  CHECK(cfg.warmup_ttis == 1000);
  CHECK(cfg.seed == 1);
}

TEST_CASE("keys override defaults with type checking") {
  const SystemConfig cfg = parse_config_text(
      "[scheduler]\n"
      "algorithm = mpmpf\n"
      "alpha1 = 2\n"
      "\n"
      "[radio]\n"
      "antenna = 1x2  ; SIMO receiver\n"
      "ue_speed_kmh = 30\n"
      "\n"
      "[run]\n"
      "ttis = 200\n"
      "warmup_ttis = 50\n"
      "seed = 99\n");
  CHECK(cfg.sched.algo == SchedAlgo::MPMPF);
  CHECK(cfg.sched.alpha1 == doctest::Approx(2.0));  // M2 exponents
  CHECK(cfg.sched.alpha2 == doctest::Approx(1.0));
  CHECK(cfg.antenna == AntennaMode::Simo1x2);
  CHECK(cfg.ue_speed_kmh == doctest::Approx(30.0));
  CHECK(cfg.n_ttis == 200);
  CHECK(cfg.seed == 99);
}

TEST_CASE("errors carry the key path") {
  CHECK_FAILS_WITH(parse_config_text("[radio]\nprbs = 0\n"), "radio.prbs");
  CHECK_FAILS_WITH(parse_config_text("[radio]\nbogus = 1\n"), "radio.bogus");
  CHECK_FAILS_WITH(parse_config_text("[nonsense]\nx = 1\n"), "nonsense");
  CHECK_FAILS_WITH(parse_config_text("[run]\nttis = abc\n"), "run.ttis");
  CHECK_FAILS_WITH(parse_config_text("[radio]\nantenna = 4x4\n"), "radio.antenna");
  CHECK_FAILS_WITH(parse_config_text("[scheduler]\nforgetting_factor = 1\n"),
                   "scheduler.forgetting_factor");
  CHECK_FAILS_WITH(parse_config_text("x = 1\n"), "outside any section");
  CHECK_FAILS_WITH(parse_config_text("[run]\nttis = 100\nwarmup_ttis = 100\n"),
                   "statistics window");
}

TEST_CASE("mask section") {
  const SystemConfig pm1 = parse_config_text("[mask]\nname = pm1\n");
  CHECK(pm1.mask_name == "pm1");
  CHECK(pm1.mask.kind == MaskKind::Sfr);

  const SystemConfig rb = parse_config_text("[mask]\nname = rb012\n");
  CHECK(rb.mask.kind == MaskKind::RbPattern);

  const SystemConfig custom =
      parse_config_text("[mask]\nname = custom\nlevels_db = 0,-2,-6\n");
  CHECK(custom.mask_name == "custom");
  REQUIRE(custom.mask.levels_db.size() == 3);
  CHECK(custom.mask.levels_db[2] == doctest::Approx(-6.0));

  CHECK_FAILS_WITH(parse_config_text("[mask]\nname = pm9\n"), "mask.name");
  CHECK_FAILS_WITH(parse_config_text("[mask]\nname = flat\nlevels_db = 0,-1,-2\n"),
                   "mask.levels_db");
  CHECK_FAILS_WITH(parse_config_text("[mask]\nname = custom\n"), "mask.levels_db");
}

TEST_CASE("mcs table override") {
  const SystemConfig cfg = parse_config_text(
      "[mcs-table]\n"
      "entry0 = 2 0.5 1.0 0.0 0.6\n"
      "entry1 = 4 0.5 4.0 6.0 0.6\n");
  REQUIRE(cfg.mcs.size() == 2);
  CHECK(cfg.mcs[1].bits_per_symbol == 4);
  CHECK(cfg.mcs[1].threshold_db == doctest::Approx(6.0));

  CHECK_FAILS_WITH(parse_config_text("[mcs-table]\nentry1 = 2 0.5 1 0 0.6\n"),
                   "contiguous");
  CHECK_FAILS_WITH(parse_config_text("[mcs-table]\nentry0 = 2 0.5 1 0\n"),
                   "mcs-table.entry0");
  // Equal spectral efficiency rows are rejected by table validation.
  CHECK_FAILS_WITH(parse_config_text("[mcs-table]\n"
                                     "entry0 = 2 0.5 1 0 0.6\n"
                                     "entry1 = 2 0.5 2 1 0.6\n"),
                   "mcs-table");
}

TEST_CASE("render and parse round-trip") {
  SystemConfig cfg = parse_config_text(
      "[radio]\nprbs = 24\nantenna = 1x2\n"
      "[scheduler]\nalgorithm = ppf\nalpha1 = 2.5\n"
      "[mask]\nname = custom\nlevels_db = 0,-3.5,-7.25\n"
      "[run]\nttis = 300\nwarmup_ttis = 60\nseed = 42\n");
  const std::string text = render_config(cfg);
  const SystemConfig back = parse_config_text(text);
  CHECK(render_config(back) == text);
  CHECK(config_fingerprint(back) == config_fingerprint(cfg));
}

TEST_CASE("fingerprint is stable and sensitive") {
  // Frozen canonical-format hash of the default config; any change to the
  // rendered form or the defaults must be deliberate.
  CHECK(config_fingerprint(SystemConfig{}) == "739e6478b03463bf");

  SystemConfig cfg;
  cfg.seed = 2;
  CHECK(config_fingerprint(cfg) != config_fingerprint(SystemConfig{}));
}

TEST_CASE("scheduler token and mask overrides") {
  SystemConfig cfg;
  apply_scheduler_token(cfg, "mpmpf-m2");
  CHECK(cfg.sched.algo == SchedAlgo::MPMPF);
  CHECK(cfg.sched.alpha1 == doctest::Approx(2.0));
  CHECK(cfg.sched.alpha2 == doctest::Approx(1.0));
  apply_scheduler_token(cfg, "pf");
  CHECK(cfg.sched.algo == SchedAlgo::PF);
  CHECK(cfg.sched.alpha1 == doctest::Approx(2.0));  // presets only via suffix
  CHECK_THROWS(apply_scheduler_token(cfg, "mpmpf-m9"));
  CHECK_THROWS(apply_scheduler_token(cfg, "rr"));

  apply_mask_name(cfg, "pm2");
  CHECK(cfg.mask_name == "pm2");
  CHECK_THROWS(apply_mask_name(cfg, "nope"));
}

TEST_CASE("config files load from disk") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ofdmasim_cfg_test";
  fs::create_directories(dir);
  const fs::path file = dir / "a.ini";
  {
    std::ofstream out(file);
    out << "# comment only\n[run]\nseed = 7\n";
  }
  const SystemConfig cfg = parse_config(file.string());
  CHECK(cfg.seed == 7);
  CHECK_THROWS(parse_config((dir / "missing.ini").string()));
  fs::remove_all(dir);
}
