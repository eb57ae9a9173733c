#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rmm/dataset.hpp"
#include "rmm/forecaster.hpp"

namespace rmm::eval {

double mse(std::span<const double> pred, std::span<const double> target);
double mae(std::span<const double> pred, std::span<const double> target);

struct Errors {
  double mse = 0.0;
  double mae = 0.0;
};

/// Errors over every element (pairs × horizon × channels) on the normalized scale.
Errors evaluate(const forecast::ForecastModel& model, const data::WindowedDataset& windows);

struct EvalReport {
  std::string dataset;
  std::string task;
  std::string model = "rmm";
  std::size_t horizon = 0;
  double rho = 0.0;
  double r_in = 0.0;
  std::size_t lookback = 0;
  std::size_t reservoir_size = 0;
  double ridge = 0.0;
  std::string split;
  double mse = 0.0;
  double mae = 0.0;
  double seconds = 0.0;  // wall clock; kept out of CSV output by default
};

struct Grid {
  std::vector<double> rhos{0.9, 0.99, 0.999, 0.9999};
  std::vector<double> r_ins{0.01, 0.05, 0.1, 1.0};
  std::size_t lookback = 336;
  std::size_t reservoir_size = 150;
  double ridge = 1e-4;
  double rank_tol = motifs::kDefaultRankTol;
  forecast::FeatureKind kind = forecast::FeatureKind::MotifProjection;
  bool refit_with_val = false;
  unsigned jobs = 0;  // 0: hardware concurrency
};

/// Channel selection for one forecasting task on a prepared dataset.
struct TaskSetup {
  std::string dataset;
  data::Task task = data::Task::Univariate;
  std::size_t horizon = 0;
  std::vector<std::size_t> input_channels;
  std::vector<std::size_t> target_channels;
};

/// Univariate: the target column is the only input and output. Multivariate:
/// every channel in, every channel out.
TaskSetup make_task(const data::PreparedDataset& data, data::Task task, std::size_t horizon,
                    const std::string& target_column);

struct GridSearchResult {
  std::vector<EvalReport> validation;  // grid order: ρ ascending, then r_in ascending
  EvalReport test;
  double best_rho = 0.0;
  double best_r_in = 0.0;
  forecast::ForecastModel model;
};

/// Index of the lowest validation MSE; ties go to smaller ρ, then smaller r_in.
std::size_t select_best(std::span<const EvalReport> reports);

GridSearchResult grid_search(const data::PreparedDataset& data, const TaskSetup& task, const Grid& grid);

/// Fits one configuration on the train split, or on train+val.
forecast::ForecastModel fit_config(const data::PreparedDataset& data, const TaskSetup& task, const Grid& grid,
                                   double rho, double r_in, bool include_val);

/// Fits a single configuration on the train split (or train+val) and reports
/// on `split` ("val" or "test").
EvalReport fit_and_score(const data::PreparedDataset& data, const TaskSetup& task, const Grid& grid,
                         double rho, double r_in, const std::string& split,
                         forecast::ForecastModel* model_out = nullptr);

struct RelevanceProfile {
  std::vector<double> scores;       // per motif index, length N_m
  std::vector<std::size_t> order;   // motif indices by descending score
  std::string dataset;
  std::size_t horizon = 0;

  std::vector<std::size_t> top(std::size_t k) const;
};

/// Score of motif i: Euclidean norm of every readout weight attached to
/// feature i across channels and outputs. Rejects L-RC models.
RelevanceProfile motif_relevance(const forecast::ForecastModel& model);

/// Sign changes between consecutive nonzero entries.
std::size_t zero_crossings(std::span<const double> values);
double median(std::vector<double> values);

void write_reports_csv(std::ostream& out, std::span<const EvalReport> reports, bool include_timing = false);

struct PublishedResult {
  std::string dataset;
  std::size_t horizon;
  std::string model;
  double mse;
  double mae;
};

/// Baseline numbers as published by their authors: Informer, LSTMa and ARIMA
/// from Zhou et al. (2021) for univariate tasks; Fourier and wavelet FEDformer
/// from Zhou et al. (2022) for multivariate tasks.
std::span<const PublishedResult> published_baselines(data::Task task);

/// Dataset × horizon table with our MSE/MAE next to each published baseline.
std::string format_comparison_table(data::Task task, std::span<const EvalReport> test_reports);

}  // namespace rmm::eval
