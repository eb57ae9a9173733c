#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmm/matrix.hpp"

namespace rmm::data {

struct TimeSeries {
  Matrix values;  // T×D, rows are time steps
  std::vector<std::string> channels;
  std::vector<std::string> timestamps;
  std::string period;
  std::string name;

  std::size_t length() const { return values.rows(); }
  std::size_t dims() const { return values.cols(); }
  std::size_t channel_index(const std::string& channel) const;
};

enum class MissingPolicy { Reject, ForwardFill };

struct CsvSchema {
  std::string timestamp_column = "date";
  std::vector<std::string> value_columns;  // empty: every non-timestamp column
  MissingPolicy missing = MissingPolicy::Reject;
  double max_bad_fraction = 0.01;  // malformed rows tolerated before failing
};

struct IngestionReport {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_dropped = 0;  // missing cells under Reject, or malformed
  std::size_t rows_filled = 0;   // rows with cells forward-filled
  std::size_t malformed = 0;
};

struct LoadedSeries {
  TimeSeries series;
  IngestionReport report;
};

LoadedSeries parse_csv(std::istream& in, const CsvSchema& schema, std::string name = {});
LoadedSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Chronological partition [0, train_end) [train_end, val_end) [val_end, test_end).
struct SplitBounds {
  std::size_t train_end = 0;
  std::size_t val_end = 0;
  std::size_t test_end = 0;
};

enum class SplitPolicy { EttHourly, EttQuarterHourly, Ratio70_10_20 };

/// ETT: 12/4/4 months of 30 days. Others: floor(0.7T) train, floor(0.2T) test.
SplitBounds split_bounds(SplitPolicy policy, std::size_t length);

/// Per-channel z-score statistics from the training partition, population std.
struct Normalizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  double forward(double v, std::size_t channel) const { return (v - mean[channel]) / stddev[channel]; }
  double inverse(double v, std::size_t channel) const { return v * stddev[channel] + mean[channel]; }
  Normalizer subset(std::span<const std::size_t> channels) const;
  bool operator==(const Normalizer&) const = default;
};

struct SplitSpec {
  SplitBounds bounds;
  Normalizer stats;
};

struct StandardizedSeries {
  TimeSeries series;
  SplitSpec split;
};

StandardizedSeries standardize(const TimeSeries& ts, const SplitBounds& bounds);
TimeSeries destandardize(const TimeSeries& normalized, const Normalizer& stats);

enum class ContextPolicy {
  PrecedingContext,  // lookback may reach into earlier partitions
  Strict,            // lookback must stay inside the partition
};

/// Supervised pairs anchored at t: window rows t−τ+1..t over the input
/// channels, target rows t+1..t+H over the target channels, flattened
/// time-major. Windows are views into a shared series.
class WindowedDataset {
 public:
  WindowedDataset() = default;
  WindowedDataset(std::shared_ptr<const Matrix> values, std::size_t lookback, std::size_t horizon,
                  std::vector<std::size_t> input_channels, std::vector<std::size_t> target_channels,
                  std::vector<std::size_t> anchors);

  std::size_t size() const { return anchors_.size(); }
  std::size_t lookback() const { return lookback_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t input_dims() const { return inputs_.size(); }
  std::size_t target_dims() const { return targets_.size(); }
  std::size_t target_width() const { return horizon_ * targets_.size(); }
  std::span<const std::size_t> anchors() const { return anchors_; }
  std::span<const std::size_t> input_channels() const { return inputs_; }
  std::span<const std::size_t> target_channels() const { return targets_; }

  /// τ×D_in block for pair k.
  Matrix window(std::size_t k) const;
  /// τ values of one input channel (index into input_channels) for pair k.
  void window_channel(std::size_t k, std::size_t input_index, std::span<double> out) const;
  std::vector<double> target(std::size_t k) const;
  void target_into(std::size_t k, std::span<double> out) const;

 private:
  std::shared_ptr<const Matrix> values_;
  std::size_t lookback_ = 0;
  std::size_t horizon_ = 0;
  std::vector<std::size_t> inputs_;
  std::vector<std::size_t> targets_;
  std::vector<std::size_t> anchors_;
};

struct WindowSplits {
  WindowedDataset train;
  WindowedDataset val;
  WindowedDataset test;
};

/// Valid anchors t (0-based) for a partition [begin, end).
std::vector<std::size_t> anchors_for(std::size_t begin, std::size_t end, std::size_t lookback,
                                     std::size_t horizon, ContextPolicy policy);

WindowedDataset make_windows(std::shared_ptr<const Matrix> values, std::size_t begin, std::size_t end,
                             std::size_t lookback, std::size_t horizon,
                             std::vector<std::size_t> input_channels,
                             std::vector<std::size_t> target_channels,
                             ContextPolicy policy = ContextPolicy::PrecedingContext);

WindowSplits make_windows(std::shared_ptr<const Matrix> values, const SplitBounds& bounds,
                          std::size_t lookback, std::size_t horizon,
                          std::vector<std::size_t> input_channels,
                          std::vector<std::size_t> target_channels,
                          ContextPolicy policy = ContextPolicy::PrecedingContext);

enum class Task { Univariate, Multivariate };
std::string to_string(Task task);
Task task_from_string(const std::string& s);

struct DatasetPreset {
  std::string id;
  std::string file_name;
  std::string source_url;
  std::string sha256;  // empty: not pinned
  std::string timestamp_column = "date";
  std::string target_column;
  SplitPolicy split = SplitPolicy::Ratio70_10_20;
  std::string period;
  std::vector<std::size_t> horizons;
};

/// Benchmark presets; univariate and multivariate Weather use different files.
std::optional<DatasetPreset> find_preset(const std::string& id, Task task);
std::vector<std::string> preset_ids();

/// Ingested, standardized dataset ready for windowing.
struct PreparedDataset {
  TimeSeries series;  // standardized
  SplitSpec split;
  IngestionReport report;
  std::string source_sha256;
};

PreparedDataset prepare(const TimeSeries& raw, SplitPolicy policy, const IngestionReport& report = {},
                        std::string source_sha256 = {});

/// Flat container: magic "RMMDATA\0", u32 version, u64 T, u64 D, T·D
/// little-endian f64 (row-major). Metadata goes to a JSON sidecar.
void write_cache(const std::filesystem::path& container, const PreparedDataset& data);
PreparedDataset read_cache(const std::filesystem::path& container);
std::filesystem::path sidecar_path(const std::filesystem::path& container);

nlohmann::json to_json(const IngestionReport& report);

}  // namespace rmm::data
