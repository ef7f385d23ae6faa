#pragma once

#include <cstdint>
#include <filesystem>

#include "regula/config.hpp"

namespace regula {

// Exit codes shared by every subcommand:
//   0  success
//   1  certified bound or an inequality check failed
//   2  invalid config or violated precondition
//   3  hypothesis unverified (approximate-fixed-point probes failed)
//   4  strictness claim failed for the configured constant
//   5  verification suite failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitBoundFailed = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitHypothesisUnverified = 3;
inline constexpr int kExitClaimFailed = 4;
inline constexpr int kExitSuiteFailed = 5;

/// Seed precedence: config value, then the REGULA_SEED environment
/// variable, then a fixed default.
std::uint64_t resolve_seed(const ExperimentConfig& cfg);

int cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_certify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_verify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace regula
