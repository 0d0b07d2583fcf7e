/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the ofdmasim authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>

#include "ofdmasim/engine.hpp"

namespace ofdmasim {

/// Parses an INI-style config (sections: radio, scheduler, mask, mcs-table,
/// run) over the built-in defaults. Unknown keys, type mismatches and
/// constraint violations throw std::invalid_argument naming the key path.
SystemConfig parse_config_text(const std::string& text);
SystemConfig parse_config(const std::string& path);

/// Canonical text form of a resolved config; parsing it reproduces the
/// config exactly.
std::string render_config(const SystemConfig& cfg);

/// FNV-1a hash of the canonical text, as 16 lowercase hex digits. Stable
/// across platforms for identical resolved configs.
std::string config_fingerprint(const SystemConfig& cfg);

/// Scheduler override token: an algorithm name with an optional exponent
/// preset suffix, e.g. "pf", "mpmpf-m2".
void apply_scheduler_token(SystemConfig& cfg, const std::string& token);

/// Mask override by name (flat | pm1 | pm2 | rb012).
void apply_mask_name(SystemConfig& cfg, const std::string& name);

}  // namespace ofdmasim
