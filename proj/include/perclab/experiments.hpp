#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perclab/config.hpp"
#include "perclab/model.hpp"
#include "perclab/renorm.hpp"

namespace perclab {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int threads = 0;  // 0: PERCLAB_THREADS, then hardware concurrency
};

struct RunResult {
  int exit_code = 0;
  bool partial = false;
  std::vector<std::string> outputs;
  std::string message;
};

/// Experiment kinds: generate, build, theta_sweep, sublinear, truncation,
/// delta_eff, renorm, transience, lemma_checks.
RunResult run_experiment(const Config& cfg, const std::string& kind,
                         const RunOptions& opts);

/// Dry-run validation; returns human-readable violations (empty when valid),
/// including the renorm parameter-system checks when that section is present.
std::vector<std::string> validate_config(const Config& cfg);

KernelSpec kernel_from_config(const Config& cfg);
ModelSpec model_from_config(const Config& cfg);
RenormParams renorm_params_from_config(const Config& cfg);

}  // namespace perclab
