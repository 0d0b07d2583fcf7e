/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ofdmasim/experiment.hpp"

namespace {

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDMA downlink system simulator: scheduler and power-mask sweeps"};

  std::string config_path, scheduler_csv, mask_csv, seeds_csv;
  std::string antenna, out_dir = "results", format = "csv";
  double alpha1 = -1.0, alpha2 = -1.0;
  int drops = -1;
  long ttis = -1;
  bool print_only = false;

  app.add_option("--config", config_path, "INI config file (defaults when omitted)");
  app.add_option("--scheduler", scheduler_csv,
                 "comma list of pf|ppf|mmpf|mpmpf, optional -m1/-m2/-m3 suffix");
  app.add_option("--mask", mask_csv, "comma list of flat|pm1|pm2|rb012");
  app.add_option("--alpha1", alpha1, "override exponent alpha1");
  app.add_option("--alpha2", alpha2, "override exponent alpha2");
  app.add_option("--antenna", antenna, "1x2 or 2x2");
  app.add_option("--seeds", seeds_csv, "comma list of base seeds");
  app.add_option("--drops", drops, "drops per variant");
  app.add_option("--ttis", ttis, "TTIs per drop");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "results format: csv or json");
  app.add_flag("--print-config", print_only, "echo the resolved config and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    ofdmasim::RunSpec spec;
    spec.base = config_path.empty() ? ofdmasim::SystemConfig{}
                                    : ofdmasim::parse_config(config_path);
    if (!antenna.empty()) spec.base.antenna = ofdmasim::antenna_mode_by_name(antenna);
    if (alpha1 >= 0.0) spec.base.sched.alpha1 = alpha1;
    if (alpha2 >= 0.0) spec.base.sched.alpha2 = alpha2;
    if (drops > 0) spec.base.n_drops = drops;
    if (ttis > 0) spec.base.n_ttis = ttis;
    spec.base.validate();
    spec.scheduler_tokens = split_list(scheduler_csv);
    spec.mask_names = split_list(mask_csv);
    for (const std::string& s : split_list(seeds_csv))
      spec.seeds.push_back(std::stoull(s));
    spec.out_dir = out_dir;
    spec.format = format;

    const std::string resolved = ofdmasim::render_config(spec.base);
    std::cout << resolved;
    std::cout << "# fingerprint " << ofdmasim::config_fingerprint(spec.base) << "\n";
    if (print_only) return 0;

    std::filesystem::create_directories(out_dir);
    std::ofstream echo(std::filesystem::path(out_dir) / "resolved_config.ini");
    echo << resolved;
    echo.close();

    const std::vector<ofdmasim::ResultRecord> records = ofdmasim::run_experiment(spec);
    ofdmasim::emit_report(records, out_dir, format);

    bool all_ok = true;
    for (const ofdmasim::ResultRecord& r : records) {
      if (r.ok()) {
        std::printf("%-24s  tput %8.3f Mbps  cov %8.2f kbps  jain %.4f  bler %.4f  (%.1fs)\n",
                    r.label.c_str(), r.throughput_mbps, r.coverage_kbps, r.jain,
                    r.bler, r.seconds);
      } else {
        std::fprintf(stderr, "%s: FAILED: %s\n", r.label.c_str(), r.error.c_str());
        all_ok = false;
      }
    }
    return all_ok ? 0 : 1;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
