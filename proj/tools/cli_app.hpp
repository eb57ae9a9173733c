#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmm/dataset.hpp"

namespace rmm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kData = 3, kNumerical = 4 };

/// Everything a run depends on. Precedence: defaults < --config file <
/// RMM_DATA_DIR (data_dir only) < command-line flags.
struct RunConfig {
  std::string dataset;
  std::string task = "univariate";  // univariate | multivariate | all (benchmark only)
  std::optional<std::vector<std::size_t>> horizons;  // unset: preset horizons
  std::optional<std::size_t> tau;                     // unset: 336, ILI adapted
  std::optional<std::size_t> reservoir_size;          // unset: 150, ILI adapted
  std::vector<double> rhos{0.9, 0.99, 0.999, 0.9999};
  std::vector<double> r_ins{0.01, 0.05, 0.1, 1.0};
  std::optional<double> rho;   // single configuration for train / motifs
  std::optional<double> r_in;
  double ridge = 1e-4;
  double rank_tol = 1e-12;
  std::string model_kind = "rmm";
  std::string fill_policy = "reject";  // reject | ffill
  bool refit_with_val = false;
  std::size_t top_k = 6;
  unsigned jobs = 0;
  std::string data_dir = "data";
  std::string cache_dir;  // empty: <data_dir>/cache
  std::string out_dir = "out";
  std::string model_path;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Applies the keys present in `j` on top of `base`; unknown keys are errors.
RunConfig apply_json(const nlohmann::json& j, RunConfig base = {});
std::string config_sha256(const RunConfig& cfg);

/// Lookback and reservoir size for a dataset, with the ILI adaptation:
/// largest τ ≤ min(train_len/2, 104) and N ≤ ⌈τ/2⌉−1 unless set explicitly.
struct Geometry {
  std::size_t tau = 336;
  std::size_t reservoir_size = 150;
};
Geometry resolve_geometry(const RunConfig& cfg, const std::string& dataset, std::size_t train_length);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rmm::cli
