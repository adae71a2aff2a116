#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace downcross {

inline constexpr const char* kVersionTag = "downcross 0.1.0";

struct RunConfig {
  std::string command;
  std::uint64_t master_seed = 1;
  std::int64_t replicas = 1;
  std::int64_t steps = 1000;
  std::int64_t step_cap = 1'000'000;
  std::int64_t profile_cap = 1'000'000;  // generation cap for construction profiles
  int x = 1;
  std::int64_t h = 2;
  int r_total = 2;
  bool window_set = false;
  int window_lo = 0, window_hi = 0;         // default: x +/- 8 for profile commands
  std::vector<std::int64_t> h_grid;         // default 4,8,...,256
  int enum_n = 2;
  std::int64_t mc_samples = 100'000;        // MC side of the enumeration cross-check
  bool negative_control = false;            // rayknight: build profiles with h+1
  int threads = 0;                          // 0 = hardware concurrency
  double gate_alpha = 0.001;
  std::string out_path;  // report JSON file ("" = stdout only)
  std::string csv_path;  // command CSV artifact ("" = skip)
};

// Config file is a single JSON document; unknown keys are rejected, missing
// keys keep their defaults.  Flags override fields (applied by the CLI).
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

struct GateResult {
  std::string name;
  std::string outcome;  // PASS | FAIL | SKIPPED
  nlohmann::json detail;
};

struct RunReport {
  RunConfig config;
  std::string command;
  std::vector<GateResult> gates;
  std::map<std::string, std::int64_t> truncation;
  nlohmann::json artifacts;  // command-specific payload (summary tables etc.)
  double wall_seconds = 0.0;

  // include_timing = false gives the deterministic byte-comparable form
  nlohmann::json to_json(bool include_timing = true) const;
  bool all_passed() const;   // FAIL-free (SKIPPED allowed)
  bool any_skipped() const;
};

RunReport cmd_simulate(const RunConfig& cfg);
RunReport cmd_rayknight(const RunConfig& cfg);
RunReport cmd_lemmas(const RunConfig& cfg);
RunReport cmd_tiecheck(const RunConfig& cfg);
RunReport cmd_enumerate(const RunConfig& cfg);

// Dispatch on cfg.command; throws std::invalid_argument for unknown commands.
RunReport run_command(const RunConfig& cfg);

}  // namespace downcross
