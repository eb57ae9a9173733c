#include "rmm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "rmm/errors.hpp"
#include "rmm/io.hpp"

namespace rmm::data {

namespace {

constexpr char kCacheMagic[8] = {'R', 'M', 'M', 'D', 'A', 'T', 'A', '\0'};
constexpr std::uint32_t kCacheVersion = 1;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  s = s.substr(b, e - b);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_missing(const std::string& s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null";
}

}  // namespace

std::size_t TimeSeries::channel_index(const std::string& channel) const {
  auto it = std::find(channels.begin(), channels.end(), channel);
  if (it == channels.end()) throw DataError("series '" + name + "' has no channel '" + channel + "'");
  return static_cast<std::size_t>(it - channels.begin());
}

LoadedSeries parse_csv(std::istream& in, const CsvSchema& schema, std::string name) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv '" + name + "': empty input");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);  // BOM
  const auto header = split_fields(line);

  auto column_of = [&](const std::string& col) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) throw DataError("csv '" + name + "': missing column '" + col + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ts_col = column_of(schema.timestamp_column);
  std::vector<std::string> value_names = schema.value_columns;
  if (value_names.empty()) {
    for (const auto& h : header)
      if (h != schema.timestamp_column) value_names.push_back(h);
  }
  std::vector<std::size_t> value_cols;
  for (const auto& v : value_names) value_cols.push_back(column_of(v));

  LoadedSeries out;
  out.series.name = std::move(name);
  out.series.channels = value_names;
  std::vector<double> values;
  std::vector<double> previous;
  IngestionReport& rep = out.report;

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++rep.rows_read;
    const auto fields = split_fields(line);
    if (fields.size() != header.size() || fields[ts_col].empty()) {
      ++rep.malformed;
      ++rep.rows_dropped;
      continue;
    }
    std::vector<double> row(value_cols.size());
    bool missing = false;
    bool malformed = false;
    bool filled = false;
    for (std::size_t c = 0; c < value_cols.size(); ++c) {
      const std::string& cell = fields[value_cols[c]];
      if (is_missing(cell)) {
        if (schema.missing == MissingPolicy::ForwardFill && !previous.empty()) {
          row[c] = previous[c];
          filled = true;
        } else {
          missing = true;
        }
        continue;
      }
      auto v = parse_number(cell);
      if (!v) {
        malformed = true;
        break;
      }
      row[c] = *v;
    }
    if (malformed) ++rep.malformed;
    if (malformed || missing) {
      ++rep.rows_dropped;
      continue;
    }
    if (!out.series.timestamps.empty()) {
      const std::string& last = out.series.timestamps.back();
      if (fields[ts_col] == last)
        throw DataError("csv '" + out.series.name + "': duplicate timestamp " + last);
      if (fields[ts_col] < last)
        throw DataError("csv '" + out.series.name + "': non-monotone timestamp " + fields[ts_col] +
                        " after " + last);
    }
    if (filled) ++rep.rows_filled;
    out.series.timestamps.push_back(fields[ts_col]);
    values.insert(values.end(), row.begin(), row.end());
    previous = std::move(row);
    ++rep.rows_kept;
  }
  if (rep.rows_read > 0 &&
      static_cast<double>(rep.malformed) > schema.max_bad_fraction * static_cast<double>(rep.rows_read)) {
    throw DataError("csv '" + out.series.name + "': " + std::to_string(rep.malformed) + " of " +
                    std::to_string(rep.rows_read) + " rows malformed (tolerance " +
                    io::format_double(schema.max_bad_fraction) + ")");
  }
  out.series.values = Matrix::from_rows(rep.rows_kept, value_cols.size(), std::move(values));
  return out;
}

LoadedSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv(in, schema, path.stem().string());
}

SplitBounds split_bounds(SplitPolicy policy, std::size_t length) {
  SplitBounds b;
  if (policy == SplitPolicy::Ratio70_10_20) {
    const auto train = static_cast<std::size_t>(static_cast<double>(length) * 0.7);
    const auto test = static_cast<std::size_t>(static_cast<double>(length) * 0.2);
    b = {train, length - test, length};
  } else {
    const std::size_t per_day = policy == SplitPolicy::EttHourly ? 24 : 96;
    const std::size_t month = 30 * per_day;
    b = {12 * month, 16 * month, 20 * month};
    if (length < b.test_end) {
      throw DataError("ETT split needs " + std::to_string(b.test_end) + " rows, series has " +
                      std::to_string(length));
    }
  }
  if (!(b.train_end > 0 && b.train_end < b.val_end && b.val_end < b.test_end)) {
    throw DataError("series of length " + std::to_string(length) + " is too short to split");
  }
  return b;
}

Normalizer Normalizer::subset(std::span<const std::size_t> channels) const {
  Normalizer n;
  for (std::size_t c : channels) {
    n.mean.push_back(mean.at(c));
    n.stddev.push_back(stddev.at(c));
  }
  return n;
}

StandardizedSeries standardize(const TimeSeries& ts, const SplitBounds& bounds) {
  const std::size_t n = bounds.train_end;
  if (n < 2) throw DataError("standardize: train segment needs at least 2 rows");
  if (n > ts.length()) throw DataError("standardize: train segment exceeds series length");
  const std::size_t d = ts.dims();
  Normalizer stats{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t c = 0; c < d; ++c) {
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) sum += ts.values(t, c);
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double e = ts.values(t, c) - mu;
      ss += e * e;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 0.0)) {
      throw DataError("standardize: channel '" + (c < ts.channels.size() ? ts.channels[c] : std::to_string(c)) +
                      "' has zero variance on the train segment");
    }
    stats.mean[c] = mu;
    stats.stddev[c] = sd;
  }
  StandardizedSeries out{ts, SplitSpec{bounds, stats}};
  for (std::size_t t = 0; t < ts.length(); ++t)
    for (std::size_t c = 0; c < d; ++c) out.series.values(t, c) = stats.forward(ts.values(t, c), c);
  return out;
}

TimeSeries destandardize(const TimeSeries& normalized, const Normalizer& stats) {
  if (stats.mean.size() != normalized.dims()) throw DimensionError("destandardize: channel count mismatch");
  TimeSeries out = normalized;
  for (std::size_t t = 0; t < out.length(); ++t)
    for (std::size_t c = 0; c < out.dims(); ++c) out.values(t, c) = stats.inverse(normalized.values(t, c), c);
  return out;
}

WindowedDataset::WindowedDataset(std::shared_ptr<const Matrix> values, std::size_t lookback,
                                 std::size_t horizon, std::vector<std::size_t> input_channels,
                                 std::vector<std::size_t> target_channels, std::vector<std::size_t> anchors)
    : values_(std::move(values)),
      lookback_(lookback),
      horizon_(horizon),
      inputs_(std::move(input_channels)),
      targets_(std::move(target_channels)),
      anchors_(std::move(anchors)) {
  if (!values_) throw DataError("WindowedDataset: null series");
  for (std::size_t c : inputs_)
    if (c >= values_->cols()) throw DimensionError("WindowedDataset: input channel out of range");
  for (std::size_t c : targets_)
    if (c >= values_->cols()) throw DimensionError("WindowedDataset: target channel out of range");
  for (std::size_t t : anchors_)
    if (t + 1 < lookback_ || t + horizon_ >= values_->rows())
      throw DimensionError("WindowedDataset: anchor out of range");
}

Matrix WindowedDataset::window(std::size_t k) const {
  Matrix w(lookback_, inputs_.size());
  const std::size_t start = anchors_.at(k) + 1 - lookback_;
  for (std::size_t i = 0; i < lookback_; ++i)
    for (std::size_t c = 0; c < inputs_.size(); ++c) w(i, c) = (*values_)(start + i, inputs_[c]);
  return w;
}

void WindowedDataset::window_channel(std::size_t k, std::size_t input_index, std::span<double> out) const {
  if (out.size() != lookback_) throw DimensionError("window_channel: output length mismatch");
  const std::size_t start = anchors_[k] + 1 - lookback_;
  const std::size_t c = inputs_.at(input_index);
  for (std::size_t i = 0; i < lookback_; ++i) out[i] = (*values_)(start + i, c);
}

std::vector<double> WindowedDataset::target(std::size_t k) const {
  std::vector<double> y(target_width());
  target_into(k, y);
  return y;
}

void WindowedDataset::target_into(std::size_t k, std::span<double> out) const {
  if (out.size() != target_width()) throw DimensionError("target_into: output length mismatch");
  const std::size_t t = anchors_.at(k);
  for (std::size_t h = 0; h < horizon_; ++h)
    for (std::size_t c = 0; c < targets_.size(); ++c)
      out[h * targets_.size() + c] = (*values_)(t + 1 + h, targets_[c]);
}

std::vector<std::size_t> anchors_for(std::size_t begin, std::size_t end, std::size_t lookback,
                                     std::size_t horizon, ContextPolicy policy) {
  if (lookback == 0 || horizon == 0) throw ConfigError("lookback and horizon must be >= 1");
  std::vector<std::size_t> anchors;
  if (end < begin + horizon) return anchors;
  std::size_t first = begin == 0 ? 0 : begin - 1;
  const std::size_t context_start = policy == ContextPolicy::Strict ? begin : 0;
  first = std::max(first, context_start + lookback - 1);
  // target rows t+1..t+H must end inside the partition: t <= end - H - 1
  for (std::size_t t = first; t < end - horizon; ++t) anchors.push_back(t);
  return anchors;
}

WindowedDataset make_windows(std::shared_ptr<const Matrix> values, std::size_t begin, std::size_t end,
                             std::size_t lookback, std::size_t horizon,
                             std::vector<std::size_t> input_channels,
                             std::vector<std::size_t> target_channels, ContextPolicy policy) {
  if (!values || end > values->rows() || begin >= end) throw DataError("make_windows: bad partition");
  auto anchors = anchors_for(begin, end, lookback, horizon, policy);
  if (anchors.empty()) {
    throw DataError("make_windows: partition [" + std::to_string(begin) + ", " + std::to_string(end) +
                    ") too short for lookback " + std::to_string(lookback) + " and horizon " +
                    std::to_string(horizon));
  }
  return WindowedDataset(std::move(values), lookback, horizon, std::move(input_channels),
                         std::move(target_channels), std::move(anchors));
}

WindowSplits make_windows(std::shared_ptr<const Matrix> values, const SplitBounds& bounds,
                          std::size_t lookback, std::size_t horizon,
                          std::vector<std::size_t> input_channels,
                          std::vector<std::size_t> target_channels, ContextPolicy policy) {
  return WindowSplits{
      make_windows(values, 0, bounds.train_end, lookback, horizon, input_channels, target_channels, policy),
      make_windows(values, bounds.train_end, bounds.val_end, lookback, horizon, input_channels,
                   target_channels, policy),
      make_windows(values, bounds.val_end, bounds.test_end, lookback, horizon, input_channels,
                   target_channels, policy)};
}

std::string to_string(Task task) { return task == Task::Univariate ? "univariate" : "multivariate"; }

Task task_from_string(const std::string& s) {
  if (s == "univariate" || s == "S") return Task::Univariate;
  if (s == "multivariate" || s == "M") return Task::Multivariate;
  throw ConfigError("unknown task '" + s + "' (expected univariate or multivariate)");
}

namespace {

struct PresetEntry {
  Task task;
  DatasetPreset preset;
};

const std::vector<PresetEntry>& preset_table() {
  static const std::string kEtt = "https://github.com/zhouhaoyi/ETDataset";
  static const std::string kEcl = "https://archive.ics.uci.edu/dataset/321/electricityloaddiagrams20112014";
  static const std::string kLcd = "https://www.ncei.noaa.gov/data/local-climatological-data/";
  static const std::string kFx = "https://github.com/laiguokun/multivariate-time-series-data";
  static const std::string kIli = "https://gis.cdc.gov/grasp/fluview/fluportaldashboard.html";
  static const std::vector<PresetEntry> table = {
      {Task::Univariate, {"ETTh1", "ETTh1.csv", kEtt, "", "date", "OT", SplitPolicy::EttHourly, "1 hour", {24, 48, 168, 336, 720}}},
      {Task::Univariate, {"ETTh2", "ETTh2.csv", kEtt, "", "date", "OT", SplitPolicy::EttHourly, "1 hour", {24, 48, 168, 336, 720}}},
      {Task::Univariate, {"ETTm1", "ETTm1.csv", kEtt, "", "date", "OT", SplitPolicy::EttQuarterHourly, "15 minutes", {24, 48, 96, 288, 672}}},
      {Task::Univariate, {"ECL", "ECL.csv", kEcl, "", "date", "MT_320", SplitPolicy::Ratio70_10_20, "1 hour", {48, 168, 336, 720, 960}}},
      {Task::Univariate, {"Weather", "WTH.csv", kLcd, "", "date", "WetBulbCelsius", SplitPolicy::Ratio70_10_20, "1 hour", {24, 48, 168, 336}}},
      {Task::Multivariate, {"ETTm2", "ETTm2.csv", kEtt, "", "date", "OT", SplitPolicy::EttQuarterHourly, "15 minutes", {96, 192, 336, 720}}},
      {Task::Multivariate, {"Exchange", "exchange_rate.csv", kFx, "", "date", "OT", SplitPolicy::Ratio70_10_20, "1 day", {96, 192, 336, 720}}},
      {Task::Multivariate, {"ILI", "national_illness.csv", kIli, "", "date", "OT", SplitPolicy::Ratio70_10_20, "1 week", {24, 36, 48, 60}}},
      {Task::Multivariate, {"Weather", "weather.csv", kLcd, "", "date", "OT", SplitPolicy::Ratio70_10_20, "10 minutes", {96, 192, 336, 720}}},
  };
  return table;
}

}  // namespace

std::optional<DatasetPreset> find_preset(const std::string& id, Task task) {
  const auto& table = preset_table();
  for (const auto& e : table)
    if (e.preset.id == id && e.task == task) return e.preset;
  // Same file for the other task when only one task is benchmarked.
  std::optional<DatasetPreset> other;
  for (const auto& e : table) {
    if (e.preset.id != id) continue;
    if (other) return std::nullopt;  // task-specific files, ambiguous
    other = e.preset;
  }
  return other;
}

std::vector<std::string> preset_ids() {
  std::vector<std::string> ids;
  for (const auto& e : preset_table())
    if (std::find(ids.begin(), ids.end(), e.preset.id) == ids.end()) ids.push_back(e.preset.id);
  return ids;
}

PreparedDataset prepare(const TimeSeries& raw, SplitPolicy policy, const IngestionReport& report,
                        std::string source_sha256) {
  const SplitBounds bounds = split_bounds(policy, raw.length());
  StandardizedSeries st = standardize(raw, bounds);
  return PreparedDataset{std::move(st.series), st.split, report, std::move(source_sha256)};
}

std::filesystem::path sidecar_path(const std::filesystem::path& container) {
  auto p = container;
  p += ".json";
  return p;
}

nlohmann::json to_json(const IngestionReport& r) {
  return {{"rows_read", r.rows_read},
          {"rows_kept", r.rows_kept},
          {"rows_dropped", r.rows_dropped},
          {"rows_filled", r.rows_filled},
          {"malformed", r.malformed}};
}

void write_cache(const std::filesystem::path& container, const PreparedDataset& data) {
  io::BinaryWriter w;
  w.bytes(std::string_view(kCacheMagic, sizeof kCacheMagic));
  w.u32(kCacheVersion);
  w.u64(data.series.length());
  w.u64(data.series.dims());
  w.f64s(data.series.values.data());
  // Statistics ride in the binary part so reloads are bit-exact.
  w.f64s(data.split.stats.mean);
  w.f64s(data.split.stats.stddev);
  io::write_file(container, w.buffer());

  nlohmann::json meta;
  meta["format"] = "rmm-data";
  meta["version"] = kCacheVersion;
  meta["name"] = data.series.name;
  meta["period"] = data.series.period;
  meta["rows"] = data.series.length();
  meta["dims"] = data.series.dims();
  meta["channels"] = data.series.channels;
  meta["first_timestamp"] = data.series.timestamps.empty() ? "" : data.series.timestamps.front();
  meta["last_timestamp"] = data.series.timestamps.empty() ? "" : data.series.timestamps.back();
  meta["split"] = {{"train_end", data.split.bounds.train_end},
                   {"val_end", data.split.bounds.val_end},
                   {"test_end", data.split.bounds.test_end}};
  meta["normalization"] = {{"mean", data.split.stats.mean}, {"stddev", data.split.stats.stddev}};
  meta["ingestion"] = to_json(data.report);
  meta["source_sha256"] = data.source_sha256;
  meta["container_sha256"] = io::sha256_hex(w.buffer());
  io::write_file(sidecar_path(container), meta.dump(2) + "\n");
}

PreparedDataset read_cache(const std::filesystem::path& container) {
  const std::string bytes = io::read_file(container);
  const auto meta = nlohmann::json::parse(io::read_file(sidecar_path(container)));
  if (meta.contains("container_sha256") && meta["container_sha256"].get<std::string>() != io::sha256_hex(bytes))
    throw DataError(container.string() + ": checksum does not match " + sidecar_path(container).string());
  io::BinaryReader r(bytes);
  if (r.bytes(sizeof kCacheMagic) != std::string_view(kCacheMagic, sizeof kCacheMagic))
    throw DataError(container.string() + ": not an rmm data container");
  if (const auto v = r.u32(); v != kCacheVersion)
    throw DataError(container.string() + ": unsupported container version " + std::to_string(v));
  const auto rows = r.u64();
  const auto dims = r.u64();
  PreparedDataset d;
  d.series.values = Matrix::from_rows(rows, dims, r.f64s(rows * dims));
  d.split.stats.mean = r.f64s(dims);
  d.split.stats.stddev = r.f64s(dims);
  if (!r.at_end()) throw DataError(container.string() + ": trailing bytes");

  d.series.name = meta.at("name").get<std::string>();
  d.series.period = meta.at("period").get<std::string>();
  d.series.channels = meta.at("channels").get<std::vector<std::string>>();
  d.split.bounds = {meta.at("split").at("train_end").get<std::size_t>(),
                    meta.at("split").at("val_end").get<std::size_t>(),
                    meta.at("split").at("test_end").get<std::size_t>()};
  const auto& ing = meta.at("ingestion");
  d.report = {ing.at("rows_read"), ing.at("rows_kept"), ing.at("rows_dropped"), ing.at("rows_filled"),
              ing.at("malformed")};
  d.source_sha256 = meta.at("source_sha256").get<std::string>();
  if (d.series.channels.size() != dims) throw DataError(container.string() + ": sidecar channel count mismatch");
  return d;
}

}  // namespace rmm::data
