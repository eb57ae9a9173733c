#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rmm/dataset.hpp"
#include "rmm/matrix.hpp"
#include "rmm/motifs.hpp"
#include "rmm/scr.hpp"

namespace rmm::forecast {

enum class FeatureKind {
  MotifProjection,  // Lin-RMM: Mᵀz per channel
  ReservoirState,   // L-RC: A·z per channel
};

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

/// Maps a τ×D_in window to a feature vector: per-channel blocks concatenated
/// in channel order.
struct FeatureExtractor {
  FeatureKind kind = FeatureKind::MotifProjection;
  motifs::MotifBasis basis;  // MotifProjection
  scr::OperatorA op;         // ReservoirState
  scr::ReservoirSpec reservoir;
  std::size_t lookback = 0;
  std::size_t input_channels = 1;

  std::size_t block_dim() const;
  std::size_t feature_dim() const { return block_dim() * input_channels; }
};

FeatureExtractor make_rmm_extractor(const scr::ReservoirSpec& spec, std::size_t lookback,
                                    std::size_t input_channels,
                                    double rank_tol = motifs::kDefaultRankTol);
FeatureExtractor make_lrc_extractor(const scr::ReservoirSpec& spec, std::size_t lookback,
                                    std::size_t input_channels);

std::vector<double> featurize(const Matrix& window, const FeatureExtractor& extractor);

/// Features for pairs [begin, end) of a windowed dataset, one row per pair.
Matrix featurize_batch(const data::WindowedDataset& windows, const FeatureExtractor& extractor,
                       std::size_t begin, std::size_t end);

struct LinearReadout {
  Matrix weights;                  // feature_dim × output_dim
  std::vector<double> intercept;   // output_dim
  double ridge = 0.0;
  bool fitted = false;
  bool minimal_norm = false;
};

struct TaskInfo {
  std::string dataset;
  std::string task;  // univariate | multivariate
  std::size_t horizon = 0;
  std::vector<std::string> input_channels;
  std::vector<std::string> target_channels;
};

struct ForecastModel {
  FeatureExtractor extractor;
  LinearReadout readout;
  data::Normalizer target_stats;  // for the target channels, in target order
  TaskInfo task;

  std::size_t output_dims() const { return task.target_channels.size(); }
};

struct FitOptions {
  std::size_t chunk_rows = 2048;
};

/// Ridge readout on the features with an unpenalized intercept. Features and
/// targets are centered first, which is the same estimator as appending a
/// constant column that is excluded from the penalty.
ForecastModel fit(const data::WindowedDataset& train, const FeatureExtractor& extractor, double ridge,
                  const FitOptions& opts = {});

/// H×D_out forecast.
Matrix predict(const ForecastModel& model, const Matrix& window);

/// Flattened (time-major) forecasts for every pair, one row per pair.
Matrix predict_batch(const ForecastModel& model, const data::WindowedDataset& windows);

/// Container: magic "RMMMODEL", u32 version, u64-prefixed JSON text record,
/// then little-endian f64 payload (hyperparameters, weights, intercept,
/// motif basis, normalization statistics).
std::string serialize(const ForecastModel& model);
ForecastModel deserialize(const std::string& bytes);
void save_model(const std::filesystem::path& path, const ForecastModel& model);
ForecastModel load_model(const std::filesystem::path& path);

}  // namespace rmm::forecast
