/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ofdmasim/config.hpp"

namespace ofdmasim {

/// An experiment sweep: the cartesian product of scheduler tokens, mask
/// names and seeds, each run over the base config.
struct RunSpec {
  SystemConfig base;
  std::vector<std::string> scheduler_tokens;  // empty: keep base scheduler
  std::vector<std::string> mask_names;        // empty: keep base mask
  std::vector<std::uint64_t> seeds;           // empty: keep base seed
  std::string out_dir = "results";
  std::string format = "csv";  // csv | json
};

/// One variant's outcome. Display units match the report columns; values
/// are rounded to 6 significant digits at creation so every emitted format
/// agrees byte for byte. A nonempty error marks a failed variant.
struct ResultRecord {
  std::string label;
  std::string fingerprint;
  double throughput_mbps = 0.0;  // mean cell throughput
  double coverage_kbps = 0.0;    // 5th percentile UE throughput
  double jain = 0.0;
  double bler = 0.0;
  double seconds = 0.0;
  std::vector<double> ue_tput_kbps;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// Executes every variant (bounded worker pool, one record per variant, in
/// sweep order). A variant failure is recorded and does not stop others.
std::vector<ResultRecord> run_experiment(const RunSpec& spec);

/// Writes the results table (results.csv or results.json), one per-UE
/// distribution file per variant, plot_data.csv with percentage deltas
/// against the first successful variant, and errors.log when any variant
/// failed. Throws when the directory cannot be created or written.
void emit_report(const std::vector<ResultRecord>& records,
                 const std::string& out_dir, const std::string& format);

}  // namespace ofdmasim
