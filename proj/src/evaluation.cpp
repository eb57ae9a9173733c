#include "rmm/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "rmm/errors.hpp"
#include "rmm/io.hpp"

namespace rmm::eval {

namespace {

void check_shapes(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) throw DimensionError("metric: prediction/target sizes differ");
  if (pred.empty()) throw DataError("metric: empty input");
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::shared_ptr<const Matrix> shared_values(const data::PreparedDataset& d) {
  return std::make_shared<const Matrix>(d.series.values);
}

}  // namespace

double mse(std::span<const double> pred, std::span<const double> target) {
  check_shapes(pred, target);
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - target[i]) * (pred[i] - target[i]);
  return s / static_cast<double>(pred.size());
}

double mae(std::span<const double> pred, std::span<const double> target) {
  check_shapes(pred, target);
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - target[i]);
  return s / static_cast<double>(pred.size());
}

Errors evaluate(const forecast::ForecastModel& model, const data::WindowedDataset& windows) {
  const Matrix pred = forecast::predict_batch(model, windows);
  Matrix target(windows.size(), windows.target_width());
  for (std::size_t k = 0; k < windows.size(); ++k) windows.target_into(k, target.row(k));
  return {mse(pred.data(), target.data()), mae(pred.data(), target.data())};
}

TaskSetup make_task(const data::PreparedDataset& d, data::Task task, std::size_t horizon,
                    const std::string& target_column) {
  if (horizon == 0) throw ConfigError("horizon must be >= 1");
  TaskSetup t;
  t.dataset = d.series.name;
  t.task = task;
  t.horizon = horizon;
  if (task == data::Task::Univariate) {
    const std::size_t c = d.series.channel_index(target_column);
    t.input_channels = {c};
    t.target_channels = {c};
  } else {
    for (std::size_t c = 0; c < d.series.dims(); ++c) t.input_channels.push_back(c);
    t.target_channels = t.input_channels;
  }
  return t;
}

std::size_t select_best(std::span<const EvalReport> reports) {
  if (reports.empty()) throw ConfigError("select_best: no reports");
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& a = reports[i];
    const auto& b = reports[best];
    if (std::tie(a.mse, a.rho, a.r_in) < std::tie(b.mse, b.rho, b.r_in)) best = i;
  }
  return best;
}

namespace {

[[noreturn]] void rethrow_with_context(const std::string& prefix) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(prefix + e.what());
  } catch (const std::exception& e) {
    throw NumericalError(prefix + e.what());
  }
}

forecast::ForecastModel fit_on(const std::shared_ptr<const Matrix>& values, const data::PreparedDataset& d,
                               const TaskSetup& task, const Grid& grid, double rho, double r_in,
                               std::size_t train_end) {
  const auto train = data::make_windows(values, 0, train_end, grid.lookback, task.horizon, task.input_channels,
                                        task.target_channels);
  const auto spec = scr::build_reservoir(grid.reservoir_size, rho, r_in);
  const auto extractor =
      grid.kind == forecast::FeatureKind::MotifProjection
          ? forecast::make_rmm_extractor(spec, grid.lookback, task.input_channels.size(), grid.rank_tol)
          : forecast::make_lrc_extractor(spec, grid.lookback, task.input_channels.size());
  auto model = forecast::fit(train, extractor, grid.ridge);
  model.task.dataset = task.dataset;
  model.task.task = data::to_string(task.task);
  model.task.horizon = task.horizon;
  model.task.input_channels.clear();
  model.task.target_channels.clear();
  for (std::size_t c : task.input_channels) model.task.input_channels.push_back(d.series.channels.at(c));
  for (std::size_t c : task.target_channels) model.task.target_channels.push_back(d.series.channels.at(c));
  model.target_stats = d.split.stats.subset(task.target_channels);
  return model;
}

EvalReport score_point(const std::shared_ptr<const Matrix>& values, const data::PreparedDataset& d,
                       const TaskSetup& task, const Grid& grid, double rho, double r_in,
                       const std::string& split, forecast::ForecastModel* model_out) {
  const auto start = std::chrono::steady_clock::now();
  const auto& b = d.split.bounds;
  const std::size_t train_end = grid.refit_with_val && split == "test" ? b.val_end : b.train_end;
  data::WindowedDataset scored;
  if (split == "val") {
    scored = data::make_windows(values, b.train_end, b.val_end, grid.lookback, task.horizon,
                                task.input_channels, task.target_channels);
  } else if (split == "test") {
    scored = data::make_windows(values, b.val_end, b.test_end, grid.lookback, task.horizon,
                                task.input_channels, task.target_channels);
  } else {
    throw ConfigError("fit_and_score: unknown split '" + split + "'");
  }

  auto model = fit_on(values, d, task, grid, rho, r_in, train_end);

  const Errors err = evaluate(model, scored);
  EvalReport r;
  r.dataset = task.dataset;
  r.task = data::to_string(task.task);
  r.model = forecast::to_string(grid.kind);
  r.horizon = task.horizon;
  r.rho = rho;
  r.r_in = r_in;
  r.lookback = grid.lookback;
  r.reservoir_size = grid.reservoir_size;
  r.ridge = grid.ridge;
  r.split = split;
  r.mse = err.mse;
  r.mae = err.mae;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!std::isfinite(r.mse) || !std::isfinite(r.mae))
    throw NumericalError("non-finite error at rho=" + io::format_double(rho) + " r_in=" + io::format_double(r_in));
  if (model_out) *model_out = std::move(model);
  return r;
}

}  // namespace

forecast::ForecastModel fit_config(const data::PreparedDataset& d, const TaskSetup& task, const Grid& grid,
                                   double rho, double r_in, bool include_val) {
  return fit_on(shared_values(d), d, task, grid, rho, r_in,
                include_val ? d.split.bounds.val_end : d.split.bounds.train_end);
}

EvalReport fit_and_score(const data::PreparedDataset& d, const TaskSetup& task, const Grid& grid,
                         double rho, double r_in, const std::string& split,
                         forecast::ForecastModel* model_out) {
  return score_point(shared_values(d), d, task, grid, rho, r_in, split, model_out);
}

GridSearchResult grid_search(const data::PreparedDataset& d, const TaskSetup& task, const Grid& grid) {
  const auto rhos = sorted_unique(grid.rhos);
  const auto r_ins = sorted_unique(grid.r_ins);
  if (rhos.empty() || r_ins.empty()) throw ConfigError("grid_search: empty grid");

  std::vector<std::pair<double, double>> points;
  for (double rho : rhos)
    for (double r : r_ins) points.emplace_back(rho, r);

  GridSearchResult result;
  result.validation.resize(points.size());
  std::vector<forecast::ForecastModel> models(points.size());
  const unsigned jobs = grid.jobs ? grid.jobs : std::max(1u, std::thread::hardware_concurrency());
  const auto values = shared_values(d);

  auto run_point = [&](std::size_t i) {
    try {
      result.validation[i] =
          score_point(values, d, task, grid, points[i].first, points[i].second, "val", &models[i]);
    } catch (...) {
      rethrow_with_context("grid point rho=" + io::format_double(points[i].first) +
                           " r_in=" + io::format_double(points[i].second) + ": ");
    }
  };
  for (std::size_t begin = 0; begin < points.size(); begin += jobs) {
    const std::size_t end = std::min(points.size(), begin + jobs);
    if (end - begin == 1) {
      run_point(begin);
      continue;
    }
    std::vector<std::future<void>> running;
    for (std::size_t i = begin; i < end; ++i) running.push_back(std::async(std::launch::async, run_point, i));
    for (auto& f : running) f.get();
  }

  const std::size_t best = select_best(result.validation);
  result.best_rho = points[best].first;
  result.best_r_in = points[best].second;
  // The train-only refit is the validation model itself; reuse it.
  if (grid.refit_with_val) {
    result.test = score_point(values, d, task, grid, result.best_rho, result.best_r_in, "test", &result.model);
  } else {
    const auto start = std::chrono::steady_clock::now();
    result.model = std::move(models[best]);
    const auto test = data::make_windows(values, d.split.bounds.val_end, d.split.bounds.test_end, grid.lookback,
                                         task.horizon, task.input_channels, task.target_channels);
    const Errors err = evaluate(result.model, test);
    result.test = result.validation[best];
    result.test.split = "test";
    result.test.mse = err.mse;
    result.test.mae = err.mae;
    result.test.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return result;
}

std::vector<std::size_t> RelevanceProfile::top(std::size_t k) const {
  return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(k, order.size()))};
}

RelevanceProfile motif_relevance(const forecast::ForecastModel& model) {
  if (model.extractor.kind != forecast::FeatureKind::MotifProjection)
    throw ConfigError("motif_relevance: L-RC models carry no motif semantics");
  if (!model.readout.fitted) throw ConfigError("motif_relevance: model is not fitted");
  const std::size_t nm = model.extractor.basis.count();
  const Matrix& w = model.readout.weights;
  RelevanceProfile prof;
  prof.dataset = model.task.dataset;
  prof.horizon = model.task.horizon;
  prof.scores.assign(nm, 0.0);
  for (std::size_t row = 0; row < w.rows(); ++row) {
    double ss = 0.0;
    for (double v : w.row(row)) ss += v * v;
    prof.scores[row % nm] += ss;
  }
  for (double& s : prof.scores) s = std::sqrt(s);
  prof.order.resize(nm);
  for (std::size_t i = 0; i < nm; ++i) prof.order[i] = i;
  std::stable_sort(prof.order.begin(), prof.order.end(),
                   [&](std::size_t a, std::size_t b) { return prof.scores[a] > prof.scores[b]; });
  return prof;
}

std::size_t zero_crossings(std::span<const double> values) {
  std::size_t count = 0;
  int last = 0;
  for (double v : values) {
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DataError("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_reports_csv(std::ostream& out, std::span<const EvalReport> reports, bool include_timing) {
  out << "dataset,task,model,horizon,rho,r_in,tau,N,ridge,split,mse,mae";
  if (include_timing) out << ",seconds";
  out << '\n';
  for (const auto& r : reports) {
    out << r.dataset << ',' << r.task << ',' << r.model << ',' << r.horizon << ',' << io::format_double(r.rho)
        << ',' << io::format_double(r.r_in) << ',' << r.lookback << ',' << r.reservoir_size << ','
        << io::format_double(r.ridge) << ',' << r.split << ',' << io::format_double(r.mse) << ','
        << io::format_double(r.mae);
    if (include_timing) out << ',' << io::format_double(r.seconds);
    out << '\n';
  }
}

std::string format_comparison_table(data::Task task, std::span<const EvalReport> test_reports) {
  std::vector<std::string> models;
  for (const auto& b : published_baselines(task))
    if (std::find(models.begin(), models.end(), b.model) == models.end()) models.push_back(b.model);

  std::map<std::tuple<std::string, std::size_t, std::string>, const PublishedResult*> index;
  for (const auto& b : published_baselines(task)) index[{b.dataset, b.horizon, b.model}] = &b;

  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s %5s | %15s", "dataset", "H", "Lin-RMM");
  os << buf;
  for (const auto& m : models) {
    std::snprintf(buf, sizeof buf, " | %15s", m.c_str());
    os << buf;
  }
  os << '\n';
  std::snprintf(buf, sizeof buf, "%-10s %5s | %7s %7s", "", "", "MSE", "MAE");
  os << buf;
  for (std::size_t i = 0; i < models.size(); ++i) os << " | " << "    MSE     MAE";
  os << '\n';
  std::string last;
  for (const auto& r : test_reports) {
    std::snprintf(buf, sizeof buf, "%-10s %5zu | %7.3f %7.3f", r.dataset == last ? "" : r.dataset.c_str(),
                  r.horizon, r.mse, r.mae);
    os << buf;
    last = r.dataset;
    for (const auto& m : models) {
      auto it = index.find({r.dataset, r.horizon, m});
      if (it == index.end()) {
        std::snprintf(buf, sizeof buf, " | %7s %7s", "-", "-");
      } else {
        std::snprintf(buf, sizeof buf, " | %7.3f %7.3f", it->second->mse, it->second->mae);
      }
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace rmm::eval
