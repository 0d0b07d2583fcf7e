/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace ofdmasim {

namespace {

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double round6(double v) { return std::strtod(g6(v).c_str(), nullptr); }

struct Variant {
  std::string label;
  SystemConfig cfg;
  std::string build_error;
};

std::vector<Variant> expand(const RunSpec& spec) {
  std::vector<std::string> scheds = spec.scheduler_tokens;
  if (scheds.empty()) scheds.push_back("");
  std::vector<std::string> masks = spec.mask_names;
  if (masks.empty()) masks.push_back("");
  std::vector<std::uint64_t> seeds = spec.seeds;
  const bool tag_seed = seeds.size() > 1;
  if (seeds.empty()) seeds.push_back(spec.base.seed);

  std::vector<Variant> out;
  for (const std::string& s : scheds)
    for (const std::string& m : masks)
      for (std::uint64_t seed : seeds) {
        Variant v;
        v.cfg = spec.base;
        v.cfg.seed = seed;
        try {
          if (!s.empty()) apply_scheduler_token(v.cfg, s);
          if (!m.empty()) apply_mask_name(v.cfg, m);
        } catch (const std::exception& ex) {
          v.build_error = ex.what();
        }
        std::string label = s.empty() ? sched_algo_name(v.cfg.sched.algo) : s;
        label += "-" + (m.empty() ? v.cfg.mask_name : m);
        if (tag_seed) label += "#s" + std::to_string(seed);
        v.label = label;
        out.push_back(std::move(v));
      }
  return out;
}

ResultRecord run_variant(const Variant& v) {
  ResultRecord rec;
  rec.label = v.label;
  if (!v.build_error.empty()) {
    rec.error = v.build_error;
    return rec;
  }
  rec.fingerprint = config_fingerprint(v.cfg);
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const Report rep = run_all(v.cfg);
    const auto t1 = std::chrono::steady_clock::now();
    rec.throughput_mbps = round6(rep.mean_cell_tput_bps / 1e6);
    rec.coverage_kbps = round6(rep.coverage_bps / 1e3);
    rec.jain = round6(rep.jain);
    rec.bler = round6(rep.bler);
    rec.seconds = round6(std::chrono::duration<double>(t1 - t0).count());
    rec.ue_tput_kbps.reserve(rep.pooled_ue_tput_bps.size());
    for (double bps : rep.pooled_ue_tput_bps) rec.ue_tput_kbps.push_back(round6(bps / 1e3));
  } catch (const std::exception& ex) {
    rec.error = ex.what();
  }
  return rec;
}

// File names derive from variant labels; keep them shell-friendly.
std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return out;
}

}  // namespace

std::vector<ResultRecord> run_experiment(const RunSpec& spec) {
  const std::vector<Variant> variants = expand(spec);
  std::vector<ResultRecord> records(variants.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < variants.size(); i = next.fetch_add(1))
      records[i] = run_variant(variants[i]);
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_workers =
      std::min<unsigned>(hw, static_cast<unsigned>(variants.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  return records;
}

void emit_report(const std::vector<ResultRecord>& records,
                 const std::string& out_dir, const std::string& format) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");
  if (format != "csv" && format != "json")
    throw std::invalid_argument("emit_report: format must be csv or json");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + out_dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(out_dir) / name).string());
    return f;
  };

  if (format == "csv") {
    std::ofstream f = open("results.csv");
    f << "label,throughput_mbps,coverage_kbps,jain,bler,seconds\n";
    for (const ResultRecord& r : records) {
      if (!r.ok()) continue;
      f << r.label << "," << g6(r.throughput_mbps) << "," << g6(r.coverage_kbps)
        << "," << g6(r.jain) << "," << g6(r.bler) << "," << g6(r.seconds) << "\n";
    }
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const ResultRecord& r : records) {
      if (!r.ok()) continue;
      arr.push_back({{"label", r.label},
                     {"fingerprint", r.fingerprint},
                     {"throughput_mbps", r.throughput_mbps},
                     {"coverage_kbps", r.coverage_kbps},
                     {"jain", r.jain},
                     {"bler", r.bler},
                     {"seconds", r.seconds},
                     {"ue_tput_kbps", r.ue_tput_kbps}});
    }
    std::ofstream f = open("results.json");
    f << arr.dump(2) << "\n";
  }

  for (const ResultRecord& r : records) {
    if (!r.ok()) continue;
    std::ofstream f = open(sanitize(r.label) + "_ue_throughput.csv");
    f << "ue_throughput_kbps\n";
    for (double v : r.ue_tput_kbps) f << g6(v) << "\n";
  }

  // Plot data: absolute values plus percentage deltas against the first
  // successful variant, which acts as the baseline.
  const ResultRecord* base = nullptr;
  for (const ResultRecord& r : records)
    if (r.ok()) {
      base = &r;
      break;
    }
  if (base) {
    auto delta = [](double v, double b) { return b != 0.0 ? 100.0 * (v / b - 1.0) : 0.0; };
    std::ofstream f = open("plot_data.csv");
    f << "label,throughput_mbps,coverage_kbps,jain,"
         "delta_throughput_pct,delta_coverage_pct,delta_jain_pct\n";
    for (const ResultRecord& r : records) {
      if (!r.ok()) continue;
      f << r.label << "," << g6(r.throughput_mbps) << "," << g6(r.coverage_kbps)
        << "," << g6(r.jain) << "," << g6(delta(r.throughput_mbps, base->throughput_mbps))
        << "," << g6(delta(r.coverage_kbps, base->coverage_kbps)) << ","
        << g6(delta(r.jain, base->jain)) << "\n";
    }
  }

  bool any_error = false;
  for (const ResultRecord& r : records) any_error = any_error || !r.ok();
  if (any_error) {
    std::ofstream f = open("errors.log");
    for (const ResultRecord& r : records)
      if (!r.ok()) f << r.label << ": " << r.error << "\n";
  }
}

}  // namespace ofdmasim
