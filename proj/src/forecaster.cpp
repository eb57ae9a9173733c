#include "rmm/forecaster.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rmm/errors.hpp"
#include "rmm/io.hpp"
#include "rmm/numerics.hpp"

namespace rmm::forecast {

namespace {

constexpr char kModelMagic[8] = {'R', 'M', 'M', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kModelVersion = 1;

// τ×k map applied to each channel block: M for motifs, Aᵀ for states.
const Matrix& block_map(const FeatureExtractor& ex, Matrix& scratch) {
  if (ex.kind == FeatureKind::MotifProjection) return ex.basis.motifs;
  if (scratch.empty()) scratch = ex.op.a.transposed();
  return scratch;
}

}  // namespace

std::string to_string(FeatureKind kind) {
  return kind == FeatureKind::MotifProjection ? "rmm" : "lrc";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "rmm" || s == "lin-rmm") return FeatureKind::MotifProjection;
  if (s == "lrc" || s == "l-rc") return FeatureKind::ReservoirState;
  throw ConfigError("unknown model kind '" + s + "' (expected rmm or lrc)");
}

std::size_t FeatureExtractor::block_dim() const {
  return kind == FeatureKind::MotifProjection ? basis.count() : op.a.rows();
}

FeatureExtractor make_rmm_extractor(const scr::ReservoirSpec& spec, std::size_t lookback,
                                    std::size_t input_channels, double rank_tol) {
  if (input_channels == 0) throw ConfigError("feature extractor needs at least one input channel");
  FeatureExtractor ex;
  ex.kind = FeatureKind::MotifProjection;
  ex.basis = motifs::extract_motifs(spec, lookback, rank_tol);
  ex.reservoir = spec;
  ex.lookback = lookback;
  ex.input_channels = input_channels;
  return ex;
}

FeatureExtractor make_lrc_extractor(const scr::ReservoirSpec& spec, std::size_t lookback,
                                    std::size_t input_channels) {
  if (input_channels == 0) throw ConfigError("feature extractor needs at least one input channel");
  FeatureExtractor ex;
  ex.kind = FeatureKind::ReservoirState;
  ex.op = scr::operator_a(spec, lookback);
  ex.reservoir = spec;
  ex.lookback = lookback;
  ex.input_channels = input_channels;
  return ex;
}

std::vector<double> featurize(const Matrix& window, const FeatureExtractor& ex) {
  if (window.rows() != ex.lookback || window.cols() != ex.input_channels) {
    throw DimensionError("featurize: window is " + std::to_string(window.rows()) + "x" +
                         std::to_string(window.cols()) + ", extractor expects " +
                         std::to_string(ex.lookback) + "x" + std::to_string(ex.input_channels));
  }
  const std::size_t k = ex.block_dim();
  std::vector<double> f(ex.feature_dim());
  for (std::size_t c = 0; c < ex.input_channels; ++c) {
    const auto block = window.col(c);
    const auto part = ex.kind == FeatureKind::MotifProjection ? motifs::project(block, ex.basis)
                                                              : matvec(ex.op.a, block);
    std::copy(part.begin(), part.end(), f.begin() + static_cast<std::ptrdiff_t>(c * k));
  }
  return f;
}

Matrix featurize_batch(const data::WindowedDataset& windows, const FeatureExtractor& ex,
                       std::size_t begin, std::size_t end) {
  if (windows.lookback() != ex.lookback || windows.input_dims() != ex.input_channels)
    throw DimensionError("featurize_batch: dataset shape does not match extractor");
  if (begin > end || end > windows.size()) throw DimensionError("featurize_batch: bad range");
  Matrix scratch;
  const Matrix& map = block_map(ex, scratch);
  const std::size_t rows = end - begin;
  const std::size_t k = ex.block_dim();
  Matrix features(rows, ex.feature_dim());
  Matrix blocks(rows, ex.lookback);
  for (std::size_t c = 0; c < ex.input_channels; ++c) {
    for (std::size_t r = 0; r < rows; ++r) windows.window_channel(begin + r, c, blocks.row(r));
    const Matrix part = matmul(blocks, map);
    for (std::size_t r = 0; r < rows; ++r)
      std::copy(part.row(r).begin(), part.row(r).end(), features.row(r).begin() + static_cast<std::ptrdiff_t>(c * k));
  }
  return features;
}

ForecastModel fit(const data::WindowedDataset& train, const FeatureExtractor& ex, double ridge,
                  const FitOptions& opts) {
  if (train.size() == 0) throw DataError("fit: no training pairs");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ConfigError("fit: ridge must be finite and >= 0");
  const std::size_t n = train.size();
  const std::size_t p = ex.feature_dim();
  const std::size_t q = train.target_width();
  const std::size_t chunk = std::max<std::size_t>(opts.chunk_rows, 1);

  // Means by the linearity of the feature map: mean features = map(mean window).
  Matrix mean_window(ex.lookback, ex.input_channels);
  std::vector<double> y_mean(q, 0.0);
  {
    std::vector<double> buf(ex.lookback);
    std::vector<double> y(q);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t c = 0; c < ex.input_channels; ++c) {
        train.window_channel(k, c, buf);
        for (std::size_t i = 0; i < ex.lookback; ++i) mean_window(i, c) += buf[i];
      }
      train.target_into(k, y);
      for (std::size_t j = 0; j < q; ++j) y_mean[j] += y[j];
    }
    for (double& v : mean_window.data()) v /= static_cast<double>(n);
    for (double& v : y_mean) v /= static_cast<double>(n);
  }
  const std::vector<double> x_mean = featurize(mean_window, ex);

  auto centered_chunk = [&](std::size_t b, std::size_t e, Matrix& xc, Matrix& yc) {
    xc = featurize_batch(train, ex, b, e);
    yc = Matrix(e - b, q);
    for (std::size_t r = 0; r < e - b; ++r) {
      auto xr = xc.row(r);
      for (std::size_t j = 0; j < p; ++j) xr[j] -= x_mean[j];
      auto yr = yc.row(r);
      train.target_into(b + r, yr);
      for (std::size_t j = 0; j < q; ++j) yr[j] -= y_mean[j];
    }
  };

  numerics::RidgeResult solved;
  if (ridge > 0.0) {
    Matrix g(p, p);
    Matrix xty(p, q);
    Matrix xc;
    Matrix yc;
    for (std::size_t b = 0; b < n; b += chunk) {
      const std::size_t e = std::min(n, b + chunk);
      centered_chunk(b, e, xc, yc);
      const Matrix gc = gram(xc);
      const Matrix xy = matmul_tn(xc, yc);
      auto gd = g.data();
      auto gcd = gc.data();
      for (std::size_t i = 0; i < gd.size(); ++i) gd[i] += gcd[i];
      auto xd = xty.data();
      auto xyd = xy.data();
      for (std::size_t i = 0; i < xd.size(); ++i) xd[i] += xyd[i];
    }
    solved = numerics::ridge_solve_gram(g, xty, ridge);
  } else {
    Matrix xc;
    Matrix yc;
    centered_chunk(0, n, xc, yc);
    solved = numerics::ridge_solve(xc, yc, 0.0);
  }

  ForecastModel model;
  model.extractor = ex;
  model.readout.weights = std::move(solved.coef);
  model.readout.intercept = y_mean;
  const auto shift = matvec_t(model.readout.weights, x_mean);
  for (std::size_t j = 0; j < q; ++j) model.readout.intercept[j] -= shift[j];
  model.readout.ridge = ridge;
  model.readout.fitted = true;
  model.readout.minimal_norm = solved.minimal_norm;
  model.task.horizon = train.horizon();
  for (std::size_t c : train.input_channels()) model.task.input_channels.push_back("c" + std::to_string(c));
  for (std::size_t c : train.target_channels()) model.task.target_channels.push_back("c" + std::to_string(c));
  if (!all_finite(model.readout.weights.data()) || !all_finite(model.readout.intercept))
    throw NumericalError("fit: non-finite readout weights");
  return model;
}

Matrix predict(const ForecastModel& model, const Matrix& window) {
  if (!model.readout.fitted) throw ConfigError("predict: model is not fitted");
  const auto f = featurize(window, model.extractor);
  auto y = matvec_t(model.readout.weights, f);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += model.readout.intercept[j];
  const std::size_t d = std::max<std::size_t>(model.output_dims(), 1);
  const std::size_t rows = y.size() / d;
  return Matrix::from_rows(rows, d, std::move(y));
}

Matrix predict_batch(const ForecastModel& model, const data::WindowedDataset& windows) {
  if (!model.readout.fitted) throw ConfigError("predict: model is not fitted");
  const std::size_t q = model.readout.intercept.size();
  if (windows.target_width() != q) throw DimensionError("predict_batch: horizon/target shape mismatch");
  Matrix out(windows.size(), q);
  constexpr std::size_t kChunk = 2048;
  for (std::size_t b = 0; b < windows.size(); b += kChunk) {
    const std::size_t e = std::min(windows.size(), b + kChunk);
    const Matrix y = matmul(featurize_batch(windows, model.extractor, b, e), model.readout.weights);
    for (std::size_t r = 0; r < e - b; ++r) {
      auto dst = out.row(b + r);
      auto src = y.row(r);
      for (std::size_t j = 0; j < q; ++j) dst[j] = src[j] + model.readout.intercept[j];
    }
  }
  return out;
}

std::string serialize(const ForecastModel& m) {
  const auto& ex = m.extractor;
  nlohmann::json meta;
  meta["format"] = "rmm-model";
  meta["kind"] = to_string(ex.kind);
  meta["reservoir"] = ex.reservoir;
  meta["lookback"] = ex.lookback;
  meta["input_channels"] = ex.input_channels;
  meta["feature_dim"] = ex.feature_dim();
  meta["output_dim"] = m.readout.intercept.size();
  meta["ridge"] = m.readout.ridge;
  meta["minimal_norm"] = m.readout.minimal_norm;
  meta["task"] = {{"dataset", m.task.dataset},
                  {"task", m.task.task},
                  {"horizon", m.task.horizon},
                  {"input_channels", m.task.input_channels},
                  {"target_channels", m.task.target_channels}};
  if (ex.kind == FeatureKind::MotifProjection) {
    meta["motifs"] = ex.basis.count();
    meta["rank_tol"] = ex.basis.rank_tol;
  }

  io::BinaryWriter w;
  w.bytes(std::string_view(kModelMagic, sizeof kModelMagic));
  w.u32(kModelVersion);
  w.string(meta.dump());
  w.u32(ex.kind == FeatureKind::MotifProjection ? 0 : 1);
  w.u64(ex.reservoir.size);
  w.f64(ex.reservoir.cycle_weight);
  w.f64(ex.reservoir.input_weight);
  w.u64(ex.lookback);
  w.u64(ex.input_channels);
  w.f64(m.readout.ridge);
  w.u32(m.readout.fitted ? 1 : 0);
  w.u32(m.readout.minimal_norm ? 1 : 0);
  w.u64(m.readout.weights.rows());
  w.u64(m.readout.weights.cols());
  w.f64s(m.readout.weights.data());
  w.f64s(m.readout.intercept);
  if (ex.kind == FeatureKind::MotifProjection) {
    w.f64(ex.basis.rank_tol);
    w.u64(ex.basis.count());
    w.f64s(ex.basis.motifs.data());
    w.f64s(ex.basis.eigenvalues);
  }
  w.u64(m.target_stats.mean.size());
  w.f64s(m.target_stats.mean);
  w.f64s(m.target_stats.stddev);
  return w.buffer();
}

ForecastModel deserialize(const std::string& bytes) {
  io::BinaryReader r(bytes);
  if (r.bytes(sizeof kModelMagic) != std::string_view(kModelMagic, sizeof kModelMagic))
    throw DataError("not an rmm model container");
  if (const auto v = r.u32(); v != kModelVersion)
    throw DataError("unsupported model container version " + std::to_string(v));
  const auto meta = nlohmann::json::parse(r.string());

  ForecastModel m;
  auto& ex = m.extractor;
  ex.kind = r.u32() == 0 ? FeatureKind::MotifProjection : FeatureKind::ReservoirState;
  const auto n = r.u64();
  const double rho = r.f64();
  const double r_in = r.f64();
  ex.reservoir = scr::build_reservoir(n, rho, r_in);
  ex.lookback = r.u64();
  ex.input_channels = r.u64();
  m.readout.ridge = r.f64();
  m.readout.fitted = r.u32() != 0;
  m.readout.minimal_norm = r.u32() != 0;
  const auto wr = r.u64();
  const auto wc = r.u64();
  m.readout.weights = Matrix::from_rows(wr, wc, r.f64s(wr * wc));
  m.readout.intercept = r.f64s(wc);
  if (ex.kind == FeatureKind::MotifProjection) {
    ex.basis.rank_tol = r.f64();
    const auto count = r.u64();
    ex.basis.motifs = Matrix::from_rows(ex.lookback, count, r.f64s(ex.lookback * count));
    ex.basis.eigenvalues = r.f64s(count);
    ex.basis.lookback = ex.lookback;
    ex.basis.source = ex.reservoir;
  } else {
    ex.op = scr::operator_a(ex.reservoir, ex.lookback);
  }
  const auto d = r.u64();
  m.target_stats.mean = r.f64s(d);
  m.target_stats.stddev = r.f64s(d);
  if (!r.at_end()) throw DataError("model container has trailing bytes");
  if (wr != ex.feature_dim()) throw DataError("model container: weight rows do not match feature dimension");

  const auto& t = meta.at("task");
  m.task.dataset = t.at("dataset").get<std::string>();
  m.task.task = t.at("task").get<std::string>();
  m.task.horizon = t.at("horizon").get<std::size_t>();
  m.task.input_channels = t.at("input_channels").get<std::vector<std::string>>();
  m.task.target_channels = t.at("target_channels").get<std::vector<std::string>>();
  return m;
}

void save_model(const std::filesystem::path& path, const ForecastModel& model) {
  io::write_file(path, serialize(model));
}

ForecastModel load_model(const std::filesystem::path& path) { return deserialize(io::read_file(path)); }

}  // namespace rmm::forecast
