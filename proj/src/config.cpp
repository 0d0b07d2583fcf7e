/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ofdmasim/config.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ofdmasim {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::invalid_argument(path + ": " + why);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& path, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') fail(path, "expected a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& path, const std::string& v) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') fail(path, "expected an integer, got '" + v + "'");
  return x;
}

std::vector<double> parse_double_list(const std::string& path, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(path, trim(item)));
  if (out.empty()) fail(path, "expected a comma-separated list");
  return out;
}

struct Entry {
  std::string section, key, value;
  std::string path() const { return section + "." + key; }
};

std::vector<Entry> tokenize(const std::string& text) {
  std::vector<Entry> entries;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find_first_of(";#");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected key = value");
    if (section.empty())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": key outside any section");
    entries.push_back({section, lower(trim(line.substr(0, eq))), trim(line.substr(eq + 1))});
  }
  return entries;
}

void apply_radio(SystemConfig& cfg, const Entry& e) {
  const std::string p = e.path();
  if (e.key == "prbs") {
    cfg.n_prb = static_cast<int>(parse_int(p, e.value));
    if (cfg.n_prb < 1) fail(p, "must be >= 1");
  } else if (e.key == "subcarriers_per_prb") {
    cfg.subcarriers_per_prb = static_cast<int>(parse_int(p, e.value));
    if (cfg.subcarriers_per_prb < 1) fail(p, "must be >= 1");
  } else if (e.key == "subcarrier_khz") {
    cfg.subcarrier_hz = 1e3 * parse_double(p, e.value);
    if (cfg.subcarrier_hz <= 0) fail(p, "must be positive");
  } else if (e.key == "tti_ms") {
    cfg.tti_s = 1e-3 * parse_double(p, e.value);
    if (cfg.tti_s <= 0) fail(p, "must be positive");
  } else if (e.key == "total_power_dbm") {
    cfg.total_power_dbm = parse_double(p, e.value);
  } else if (e.key == "carrier_ghz") {
    cfg.carrier_hz = 1e9 * parse_double(p, e.value);
    if (cfg.carrier_hz <= 0) fail(p, "must be positive");
  } else if (e.key == "ue_speed_kmh") {
    cfg.ue_speed_kmh = parse_double(p, e.value);
    if (cfg.ue_speed_kmh < 0) fail(p, "must be >= 0");
  } else if (e.key == "isd_m") {
    cfg.isd_m = parse_double(p, e.value);
    if (cfg.isd_m <= 0) fail(p, "must be positive");
  } else if (e.key == "min_dist_m") {
    cfg.min_dist_m = parse_double(p, e.value);
    if (cfg.min_dist_m <= 0) fail(p, "must be positive");
  } else if (e.key == "shadowing_std_db") {
    cfg.shadowing_std_db = parse_double(p, e.value);
    if (cfg.shadowing_std_db < 0) fail(p, "must be >= 0");
  } else if (e.key == "noise_figure_db") {
    cfg.noise_figure_db = parse_double(p, e.value);
  } else if (e.key == "samples_per_prb") {
    cfg.samples_per_prb = static_cast<int>(parse_int(p, e.value));
    if (cfg.samples_per_prb != 1 && cfg.samples_per_prb != 3) fail(p, "must be 1 or 3");
  } else if (e.key == "antenna") {
    try {
      cfg.antenna = antenna_mode_by_name(lower(e.value));
    } catch (const std::exception&) {
      fail(p, "must be 1x2 or 2x2");
    }
  } else {
    fail(p, "unknown key");
  }
}

void apply_scheduler(SystemConfig& cfg, const Entry& e) {
  const std::string p = e.path();
  if (e.key == "algorithm") {
    try {
      cfg.sched.algo = sched_algo_by_name(lower(e.value));
    } catch (const std::exception&) {
      fail(p, "must be pf, ppf, mmpf or mpmpf");
    }
  } else if (e.key == "alpha1") {
    cfg.sched.alpha1 = parse_double(p, e.value);
    if (cfg.sched.alpha1 < 0) fail(p, "must be >= 0");
  } else if (e.key == "alpha2") {
    cfg.sched.alpha2 = parse_double(p, e.value);
    if (cfg.sched.alpha2 < 0) fail(p, "must be >= 0");
  } else if (e.key == "max_mux_ues") {
    cfg.sched.max_mux_ues = static_cast<int>(parse_int(p, e.value));
    if (cfg.sched.max_mux_ues < 1) fail(p, "must be >= 1");
  } else if (e.key == "forgetting_factor") {
    cfg.sched.rho = parse_double(p, e.value);
    if (cfg.sched.rho <= 0 || cfg.sched.rho >= 1) fail(p, "must be inside (0, 1)");
  } else {
    fail(p, "unknown key");
  }
}

void apply_run(SystemConfig& cfg, const Entry& e) {
  const std::string p = e.path();
  if (e.key == "ues_per_cell") {
    cfg.ues_per_cell = static_cast<int>(parse_int(p, e.value));
    if (cfg.ues_per_cell < 0) fail(p, "must be >= 0");
  } else if (e.key == "drops") {
    cfg.n_drops = static_cast<int>(parse_int(p, e.value));
    if (cfg.n_drops < 1) fail(p, "must be >= 1");
  } else if (e.key == "ttis") {
    cfg.n_ttis = parse_int(p, e.value);
    if (cfg.n_ttis < 1) fail(p, "must be >= 1");
  } else if (e.key == "warmup_ttis") {
    cfg.warmup_ttis = parse_int(p, e.value);
    if (cfg.warmup_ttis < 0) fail(p, "must be >= 0");
  } else if (e.key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(p, e.value));
  } else if (e.key == "bler_target") {
    cfg.bler_target = parse_double(p, e.value);
    if (cfg.bler_target <= 0 || cfg.bler_target >= 1) fail(p, "must be inside (0, 1)");
  } else if (e.key == "olla_step_up_db") {
    cfg.olla_step_up_db = parse_double(p, e.value);
    if (cfg.olla_step_up_db <= 0) fail(p, "must be positive");
  } else if (e.key == "olla_clamp_db") {
    cfg.olla_clamp_db = parse_double(p, e.value);
    if (cfg.olla_clamp_db <= 0) fail(p, "must be positive");
  } else {
    fail(p, "unknown key");
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SystemConfig parse_config_text(const std::string& text) {
  const std::vector<Entry> entries = tokenize(text);
  SystemConfig cfg;

  // Radio first so the PRB grid is known before the mask is expanded.
  for (const Entry& e : entries) {
    if (e.section == "radio") apply_radio(cfg, e);
    else if (e.section == "scheduler") apply_scheduler(cfg, e);
    else if (e.section == "run") apply_run(cfg, e);
    else if (e.section != "mask" && e.section != "mcs-table")
      fail(e.section, "unknown section");
  }

  std::string mask_name = "flat";
  std::vector<double> custom_levels;
  bool have_levels = false;
  for (const Entry& e : entries) {
    if (e.section != "mask") continue;
    if (e.key == "name") {
      mask_name = lower(e.value);
    } else if (e.key == "levels_db") {
      custom_levels = parse_double_list(e.path(), e.value);
      have_levels = true;
    } else {
      fail(e.path(), "unknown key");
    }
  }
  if (mask_name == "custom") {
    if (!have_levels) fail("mask.levels_db", "required when mask.name = custom");
    try {
      cfg.mask = custom_sfr_mask(custom_levels, cfg.n_prb);
    } catch (const std::exception& ex) {
      fail("mask.levels_db", ex.what());
    }
    cfg.mask_name = "custom";
  } else {
    if (have_levels) fail("mask.levels_db", "only valid with mask.name = custom");
    try {
      cfg.mask = mask_by_name(mask_name, cfg.n_prb);
    } catch (const std::exception&) {
      fail("mask.name", "must be flat, pm1, pm2, rb012 or custom");
    }
    cfg.mask_name = mask_name;
  }

  std::vector<std::pair<int, Entry>> mcs_entries;
  for (const Entry& e : entries) {
    if (e.section != "mcs-table") continue;
    if (e.key.rfind("entry", 0) != 0) fail(e.path(), "unknown key");
    const int idx = static_cast<int>(parse_int(e.path(), e.key.substr(5)));
    mcs_entries.emplace_back(idx, e);
  }
  if (!mcs_entries.empty()) {
    std::sort(mcs_entries.begin(), mcs_entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    McsTable table;
    for (std::size_t i = 0; i < mcs_entries.size(); ++i) {
      const auto& [idx, e] = mcs_entries[i];
      if (idx != static_cast<int>(i)) fail(e.path(), "entries must be contiguous from entry0");
      std::stringstream ss(e.value);
      McsEntry m;
      if (!(ss >> m.bits_per_symbol >> m.code_rate >> m.beta >> m.threshold_db >>
            m.slope_db))
        fail(e.path(), "expected: bits_per_symbol code_rate beta threshold_db slope_db");
      std::string extra;
      if (ss >> extra) fail(e.path(), "trailing tokens after the five fields");
      table.entries.push_back(m);
    }
    try {
      table.validate();
    } catch (const std::exception& ex) {
      fail("mcs-table", ex.what());
    }
    cfg.mcs = table;
  }

  try {
    cfg.validate();
  } catch (const std::exception& ex) {
    throw std::invalid_argument(ex.what());
  }
  return cfg;
}

SystemConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string render_config(const SystemConfig& cfg) {
  std::ostringstream out;
  out << "[radio]\n";
  out << "prbs = " << cfg.n_prb << "\n";
  out << "subcarriers_per_prb = " << cfg.subcarriers_per_prb << "\n";
  out << "subcarrier_khz = " << fmt(cfg.subcarrier_hz / 1e3) << "\n";
  out << "tti_ms = " << fmt(cfg.tti_s * 1e3) << "\n";
  out << "total_power_dbm = " << fmt(cfg.total_power_dbm) << "\n";
  out << "carrier_ghz = " << fmt(cfg.carrier_hz / 1e9) << "\n";
  out << "ue_speed_kmh = " << fmt(cfg.ue_speed_kmh) << "\n";
  out << "isd_m = " << fmt(cfg.isd_m) << "\n";
  out << "min_dist_m = " << fmt(cfg.min_dist_m) << "\n";
  out << "shadowing_std_db = " << fmt(cfg.shadowing_std_db) << "\n";
  out << "noise_figure_db = " << fmt(cfg.noise_figure_db) << "\n";
  out << "samples_per_prb = " << cfg.samples_per_prb << "\n";
  out << "antenna = " << antenna_mode_name(cfg.antenna) << "\n";
  out << "\n[scheduler]\n";
  out << "algorithm = " << sched_algo_name(cfg.sched.algo) << "\n";
  out << "alpha1 = " << fmt(cfg.sched.alpha1) << "\n";
  out << "alpha2 = " << fmt(cfg.sched.alpha2) << "\n";
  out << "max_mux_ues = " << cfg.sched.max_mux_ues << "\n";
  out << "forgetting_factor = " << fmt(cfg.sched.rho) << "\n";
  out << "\n[mask]\n";
  out << "name = " << cfg.mask_name << "\n";
  if (cfg.mask_name == "custom") {
    out << "levels_db = ";
    for (std::size_t i = 0; i < cfg.mask.levels_db.size(); ++i)
      out << (i ? "," : "") << fmt(cfg.mask.levels_db[i]);
    out << "\n";
  }
  out << "\n[mcs-table]\n";
  for (int i = 0; i < cfg.mcs.size(); ++i) {
    const McsEntry& m = cfg.mcs[i];
    out << "entry" << i << " = " << m.bits_per_symbol << " " << fmt(m.code_rate)
        << " " << fmt(m.beta) << " " << fmt(m.threshold_db) << " "
        << fmt(m.slope_db) << "\n";
  }
  out << "\n[run]\n";
  out << "ues_per_cell = " << cfg.ues_per_cell << "\n";
  out << "drops = " << cfg.n_drops << "\n";
  out << "ttis = " << cfg.n_ttis << "\n";
  out << "warmup_ttis = " << cfg.warmup_ttis << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "bler_target = " << fmt(cfg.bler_target) << "\n";
  out << "olla_step_up_db = " << fmt(cfg.olla_step_up_db) << "\n";
  out << "olla_clamp_db = " << fmt(cfg.olla_clamp_db) << "\n";
  return out.str();
}

std::string config_fingerprint(const SystemConfig& cfg) {
  const std::string text = render_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a offset basis
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_scheduler_token(SystemConfig& cfg, const std::string& token) {
  std::string algo = lower(token);
  const auto dash = algo.find('-');
  if (dash != std::string::npos) {
    const std::string preset = algo.substr(dash + 1);
    algo.erase(dash);
    const auto [a1, a2] = alpha_preset(preset);
    cfg.sched.alpha1 = a1;
    cfg.sched.alpha2 = a2;
  }
  cfg.sched.algo = sched_algo_by_name(algo);
}

void apply_mask_name(SystemConfig& cfg, const std::string& name) {
  cfg.mask = mask_by_name(lower(name), cfg.n_prb);
  cfg.mask_name = lower(name);
}

}  // namespace ofdmasim
