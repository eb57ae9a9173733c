#include "cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rmm/errors.hpp"
#include "rmm/evaluation.hpp"
#include "rmm/forecaster.hpp"
#include "rmm/io.hpp"
#include "rmm/motifs.hpp"
#include "rmm/plot.hpp"

namespace fs = std::filesystem;

namespace rmm::cli {

namespace {

constexpr std::size_t kDefaultTau = 336;
constexpr std::size_t kDefaultReservoir = 150;
constexpr std::size_t kIliTauCap = 104;

const std::vector<std::string> kUnivariateSuite{"ECL", "ETTh1", "ETTh2", "ETTm1", "Weather"};
const std::vector<std::string> kMultivariateSuite{"ETTm2", "Exchange", "Weather", "ILI"};

// Records every file a command reads or writes for the manifest.
struct Ledger {
  fs::path out_dir;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;

  void input(const fs::path& p) { inputs[p.string()] = io::sha256_file(p); }

  void write(const fs::path& rel, const std::string& contents) {
    io::write_file(out_dir / rel, contents);
    outputs[rel.generic_string()] = io::sha256_hex(contents);
  }

  void model(const fs::path& rel, const forecast::ForecastModel& m) { write(rel, forecast::serialize(m)); }
};

void write_manifest(const Ledger& ledger, const std::string& command, const RunConfig& cfg) {
  nlohmann::json m;
  m["command"] = command;
  m["config"] = to_json(cfg);
  m["config_sha256"] = config_sha256(cfg);
  m["inputs"] = nlohmann::json::array();
  for (const auto& [path, sha] : ledger.inputs) m["inputs"].push_back({{"path", path}, {"sha256", sha}});
  m["outputs"] = nlohmann::json::array();
  for (const auto& [path, sha] : ledger.outputs) m["outputs"].push_back({{"path", path}, {"sha256", sha}});
  io::write_file(ledger.out_dir / "manifest.json", m.dump(2) + "\n");
}

data::Task parse_task(const std::string& s) { return data::task_from_string(s); }

data::MissingPolicy fill_policy(const std::string& s) {
  if (s == "reject") return data::MissingPolicy::Reject;
  if (s == "ffill") return data::MissingPolicy::ForwardFill;
  throw ConfigError("fill_policy must be 'reject' or 'ffill', got '" + s + "'");
}

data::DatasetPreset require_preset(const std::string& id, data::Task task) {
  if (id.empty()) throw ConfigError("no dataset given (--dataset)");
  auto p = data::find_preset(id, task);
  if (!p) {
    std::string known;
    for (const auto& k : data::preset_ids()) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown dataset '" + id + "' (known: " + known + ")");
  }
  return *p;
}

std::size_t count_value_columns(const fs::path& csv, const std::string& timestamp_column) {
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  const auto n = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  return header.find(timestamp_column) == std::string::npos ? n : n - 1;
}

struct LoadedDataset {
  data::DatasetPreset preset;
  data::PreparedDataset data;
  fs::path csv;
  fs::path container;
  bool cache_hit = false;
  std::size_t file_columns = 0;
};

// Univariate caches hold only the target channel; multivariate ones every channel.
LoadedDataset load_dataset(const RunConfig& cfg, const std::string& id, data::Task task, Ledger& ledger) {
  LoadedDataset out;
  out.preset = require_preset(id, task);
  const auto& preset = out.preset;
  out.csv = fs::path(cfg.data_dir) / preset.file_name;
  if (!fs::exists(out.csv)) {
    throw DataError("dataset file not found: " + fs::absolute(out.csv).string() + "\n  " + preset.id +
                    " is published at " + preset.source_url + "\n  download " + preset.file_name +
                    " and place it at that path, or point --data-dir / RMM_DATA_DIR at its directory");
  }
  const std::string sha = io::sha256_file(out.csv);
  ledger.inputs[out.csv.string()] = sha;
  if (!preset.sha256.empty() && preset.sha256 != sha) {
    throw DataError(out.csv.string() + ": checksum mismatch (expected " + preset.sha256 + ", got " + sha + ")");
  }
  out.file_columns = count_value_columns(out.csv, preset.timestamp_column);

  const bool univariate = task == data::Task::Univariate;
  const fs::path cache_dir = cfg.cache_dir.empty() ? fs::path(cfg.data_dir) / "cache" : fs::path(cfg.cache_dir);
  out.container = cache_dir / (out.csv.stem().string() + "-" + (univariate ? preset.target_column : "all") + "-" +
                               cfg.fill_policy + ".rmmdata");
  if (fs::exists(out.container) && fs::exists(data::sidecar_path(out.container))) {
    try {
      auto cached = data::read_cache(out.container);
      if (cached.source_sha256 == sha) {
        out.data = std::move(cached);
        out.cache_hit = true;
        return out;
      }
    } catch (const std::exception&) {
      // stale or damaged cache: rebuild below
    }
  }

  data::CsvSchema schema;
  schema.timestamp_column = preset.timestamp_column;
  if (univariate) schema.value_columns = {preset.target_column};
  schema.missing = fill_policy(cfg.fill_policy);
  auto loaded = data::load_csv(out.csv, schema);
  loaded.series.name = preset.id;
  loaded.series.period = preset.period;
  out.data = data::prepare(loaded.series, preset.split, loaded.report, sha);
  data::write_cache(out.container, out.data);
  return out;
}

std::vector<std::size_t> horizons_for(const RunConfig& cfg, const data::DatasetPreset& preset) {
  return cfg.horizons ? *cfg.horizons : preset.horizons;
}

eval::Grid make_grid(const RunConfig& cfg, const Geometry& g) {
  eval::Grid grid;
  grid.rhos = cfg.rhos;
  grid.r_ins = cfg.r_ins;
  grid.lookback = g.tau;
  grid.reservoir_size = g.reservoir_size;
  grid.ridge = cfg.ridge;
  grid.rank_tol = cfg.rank_tol;
  grid.kind = forecast::feature_kind_from_string(cfg.model_kind);
  grid.refit_with_val = cfg.refit_with_val;
  grid.jobs = cfg.jobs;
  return grid;
}

std::string model_file(const std::string& dataset, const std::string& task, std::size_t horizon,
                       const std::string& kind) {
  return "models/" + dataset + "-" + task + "-" + kind + "-H" + std::to_string(horizon) + ".rmmmodel";
}

std::string reports_csv(const std::vector<eval::EvalReport>& reports) {
  std::ostringstream s;
  eval::write_reports_csv(s, reports);
  return s.str();
}

void print_dataset(std::ostream& out, const LoadedDataset& ld) {
  const auto& d = ld.data;
  const auto& b = d.split.bounds;
  out << ld.preset.id << ": T=" << d.series.length() << " D=" << ld.file_columns << " (cached channels "
      << d.series.dims() << ", " << (ld.cache_hit ? "cache hit" : "prepared") << ")\n"
      << "  split train [0," << b.train_end << ") val [" << b.train_end << "," << b.val_end << ") test ["
      << b.val_end << "," << b.test_end << ")\n"
      << "  rows read " << d.report.rows_read << ", kept " << d.report.rows_kept << ", dropped "
      << d.report.rows_dropped << ", forward-filled " << d.report.rows_filled << "\n";
}

double require_value(const std::optional<double>& v, const char* flag) {
  if (!v) throw ConfigError(std::string("this command needs ") + flag);
  return *v;
}

// ---- commands ---------------------------------------------------------------

void cmd_prepare(const RunConfig& cfg, Ledger& ledger, std::ostream& out) {
  const auto task = parse_task(cfg.task);
  const auto ld = load_dataset(cfg, cfg.dataset, task, ledger);
  print_dataset(out, ld);
  nlohmann::json j;
  j["dataset"] = ld.preset.id;
  j["task"] = cfg.task;
  j["file"] = ld.csv.string();
  j["file_value_columns"] = ld.file_columns;
  j["rows"] = ld.data.series.length();
  j["cached_channels"] = ld.data.series.channels;
  j["container"] = ld.container.string();
  j["container_sha256"] = io::sha256_file(ld.container);
  j["ingestion"] = data::to_json(ld.data.report);
  j["split"] = {{"train_end", ld.data.split.bounds.train_end},
                {"val_end", ld.data.split.bounds.val_end},
                {"test_end", ld.data.split.bounds.test_end}};
  ledger.write("prepare-" + ld.preset.id + "-" + cfg.task + ".json", j.dump(2) + "\n");
}

void cmd_motifs(const RunConfig& cfg, Ledger& ledger, std::ostream& out) {
  motifs::MotifBasis basis;
  std::vector<std::size_t> order;
  std::optional<eval::RelevanceProfile> profile;
  std::string title;
  if (!cfg.model_path.empty()) {
    ledger.input(cfg.model_path);
    const auto model = forecast::load_model(cfg.model_path);
    profile = eval::motif_relevance(model);
    basis = model.extractor.basis;
    order = profile->order;
    title = "Most relevant motifs: " + model.task.dataset + " H=" + std::to_string(model.task.horizon);
  } else {
    const double rho = require_value(cfg.rho, "--rho (or --model)");
    const double r_in = require_value(cfg.r_in, "--r-in (or --model)");
    const std::size_t tau = cfg.tau.value_or(kDefaultTau);
    const std::size_t n = cfg.reservoir_size.value_or(kDefaultReservoir);
    basis = motifs::extract_motifs(scr::build_reservoir(n, rho, r_in), tau, cfg.rank_tol);
    for (std::size_t i = 0; i < basis.count(); ++i) order.push_back(i);
    std::ostringstream t;
    t << "Leading motifs: N=" << n << " tau=" << tau << " rho=" << rho;
    title = t.str();
  }

  std::ostringstream motifs_csv;
  motifs::write_motifs_csv(motifs_csv, basis);
  ledger.write("motifs.csv", motifs_csv.str());
  std::ostringstream eig_csv;
  motifs::write_eigenvalues_csv(eig_csv, basis);
  ledger.write("eigenvalues.csv", eig_csv.str());

  const std::size_t k = std::min(cfg.top_k, basis.count());
  std::vector<plot::Trace> traces;
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t i = order[r];
    traces.push_back({"motif " + std::to_string(i + 1), basis.motif(i)});
  }
  std::ostringstream svg;
  plot::write_line_plot(svg, traces, {title, 960, 540});
  ledger.write("motifs_top" + std::to_string(k) + ".svg", svg.str());

  if (profile) {
    std::ostringstream rel;
    rel << "rank,motif,score,eigenvalue,zero_crossings\n";
    for (std::size_t r = 0; r < order.size(); ++r) {
      const std::size_t i = order[r];
      rel << r + 1 << ',' << i + 1 << ',' << io::format_double(profile->scores[i]) << ','
          << io::format_double(basis.eigenvalues[i]) << ',' << eval::zero_crossings(basis.motif(i)) << '\n';
    }
    ledger.write("relevance.csv", rel.str());
  }
  out << "motifs: " << basis.count() << " (tau=" << basis.lookback << ", N=" << basis.source.size << "), plotted "
      << k << (profile ? " by relevance" : " by eigenvalue") << "\n";
}

void cmd_train(const RunConfig& cfg, Ledger& ledger, std::ostream& out) {
  const auto task = parse_task(cfg.task);
  const double rho = require_value(cfg.rho, "--rho");
  const double r_in = require_value(cfg.r_in, "--r-in");
  const auto ld = load_dataset(cfg, cfg.dataset, task, ledger);
  print_dataset(out, ld);
  const auto geo = resolve_geometry(cfg, ld.preset.id, ld.data.split.bounds.train_end);
  const auto grid = make_grid(cfg, geo);
  std::vector<eval::EvalReport> reports;
  for (std::size_t h : horizons_for(cfg, ld.preset)) {
    const auto setup = eval::make_task(ld.data, task, h, ld.preset.target_column);
    forecast::ForecastModel model;
    reports.push_back(eval::fit_and_score(ld.data, setup, grid, rho, r_in, "val", &model));
    if (cfg.refit_with_val) model = eval::fit_config(ld.data, setup, grid, rho, r_in, true);
    const auto path = model_file(ld.preset.id, cfg.task, h, cfg.model_kind);
    ledger.model(path, model);
    out << "  H=" << h << " val mse " << reports.back().mse << " mae " << reports.back().mae << " -> " << path
        << "\n";
  }
  ledger.write("train.csv", reports_csv(reports));
}

void cmd_evaluate(const RunConfig& cfg, Ledger& ledger, std::ostream& out) {
  if (cfg.model_path.empty()) throw ConfigError("evaluate needs --model");
  ledger.input(cfg.model_path);
  const auto model = forecast::load_model(cfg.model_path);
  const std::string dataset = cfg.dataset.empty() ? model.task.dataset : cfg.dataset;
  const auto task = parse_task(model.task.task);
  const auto ld = load_dataset(cfg, dataset, task, ledger);
  print_dataset(out, ld);

  auto index_of = [&](const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const auto& n : names) idx.push_back(ld.data.series.channel_index(n));
    return idx;
  };
  const auto values = std::make_shared<const Matrix>(ld.data.series.values);
  const auto& b = ld.data.split.bounds;
  const std::size_t tau = model.extractor.lookback;
  const std::size_t h = model.task.horizon;
  std::vector<eval::EvalReport> reports;
  for (const std::string split : {"val", "test"}) {
    const std::size_t begin = split == "val" ? b.train_end : b.val_end;
    const std::size_t end = split == "val" ? b.val_end : b.test_end;
    const auto w = data::make_windows(values, begin, end, tau, h, index_of(model.task.input_channels),
                                      index_of(model.task.target_channels));
    const auto err = eval::evaluate(model, w);
    eval::EvalReport r;
    r.dataset = ld.preset.id;
    r.task = model.task.task;
    r.model = forecast::to_string(model.extractor.kind);
    r.horizon = h;
    r.rho = model.extractor.reservoir.cycle_weight;
    r.r_in = model.extractor.reservoir.input_weight;
    r.lookback = tau;
    r.reservoir_size = model.extractor.reservoir.size;
    r.ridge = model.readout.ridge;
    r.split = split;
    r.mse = err.mse;
    r.mae = err.mae;
    reports.push_back(r);
    out << "  " << split << " mse " << r.mse << " mae " << r.mae << "\n";
  }
  ledger.write("evaluate.csv", reports_csv(reports));
}

struct SearchOutput {
  std::vector<eval::EvalReport> validation;
  std::vector<eval::EvalReport> test;
};

void search_dataset(const RunConfig& cfg, const std::string& id, data::Task task, Ledger& ledger,
                    std::ostream& out, SearchOutput& acc) {
  const auto ld = load_dataset(cfg, id, task, ledger);
  print_dataset(out, ld);
  const auto geo = resolve_geometry(cfg, ld.preset.id, ld.data.split.bounds.train_end);
  const auto grid = make_grid(cfg, geo);
  for (std::size_t h : horizons_for(cfg, ld.preset)) {
    const auto start = std::chrono::steady_clock::now();
    const auto setup = eval::make_task(ld.data, task, h, ld.preset.target_column);
    auto res = eval::grid_search(ld.data, setup, grid);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    acc.validation.insert(acc.validation.end(), res.validation.begin(), res.validation.end());
    acc.test.push_back(res.test);
    ledger.model(model_file(ld.preset.id, data::to_string(task), h, cfg.model_kind), res.model);
    out << "  H=" << h << " best rho=" << res.best_rho << " r_in=" << res.best_r_in << " test mse "
        << res.test.mse << " mae " << res.test.mae << " (tau=" << geo.tau << ", N=" << geo.reservoir_size << ", "
        << std::fixed << std::setprecision(1) << secs << " s)" << std::defaultfloat << std::setprecision(6)
        << "\n";
  }
}

void cmd_gridsearch(const RunConfig& cfg, Ledger& ledger, std::ostream& out) {
  const auto task = parse_task(cfg.task);
  SearchOutput acc;
  search_dataset(cfg, cfg.dataset, task, ledger, out, acc);
  ledger.write("gridsearch_validation.csv", reports_csv(acc.validation));
  ledger.write("gridsearch_test.csv", reports_csv(acc.test));
}

void cmd_benchmark(const RunConfig& cfg, Ledger& ledger, std::ostream& out) {
  std::vector<data::Task> tasks;
  if (cfg.task == "all") {
    tasks = {data::Task::Univariate, data::Task::Multivariate};
  } else {
    tasks = {parse_task(cfg.task)};
  }
  for (const auto task : tasks) {
    const auto& suite = task == data::Task::Univariate ? kUnivariateSuite : kMultivariateSuite;
    std::vector<std::string> ids;
    for (const auto& id : suite)
      if (cfg.dataset.empty() || cfg.dataset == id) ids.push_back(id);
    if (ids.empty()) {
      if (tasks.size() > 1) continue;
      throw ConfigError("dataset '" + cfg.dataset + "' is not part of the " + data::to_string(task) + " suite");
    }
    SearchOutput acc;
    for (const auto& id : ids) search_dataset(cfg, id, task, ledger, out, acc);
    const std::string tag = data::to_string(task);
    ledger.write("benchmark_" + tag + ".csv", reports_csv(acc.test));
    ledger.write("benchmark_" + tag + "_validation.csv", reports_csv(acc.validation));
    const auto table = eval::format_comparison_table(task, acc.test);
    ledger.write("comparison_" + tag + ".txt", table);
    out << "\n" << table;
  }
}

void validate(const RunConfig& cfg, const std::string& command) {
  if (cfg.horizons) {
    if (cfg.horizons->empty()) throw ConfigError("horizon list is empty");
    for (auto h : *cfg.horizons)
      if (h == 0) throw ConfigError("horizons must be >= 1");
  }
  if (cfg.tau && *cfg.tau == 0) throw ConfigError("tau must be >= 1");
  if (cfg.reservoir_size && *cfg.reservoir_size == 0) throw ConfigError("reservoir_size must be >= 1");
  if (cfg.rhos.empty() || cfg.r_ins.empty()) throw ConfigError("rho and r_in grids must be nonempty");
  for (double r : cfg.rhos)
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("rho grid values must lie in (0, 1)");
  for (double r : cfg.r_ins)
    if (!(r > 0.0)) throw ConfigError("r_in grid values must be > 0");
  if (!(cfg.ridge >= 0.0) || !std::isfinite(cfg.ridge)) throw ConfigError("ridge must be finite and >= 0");
  if (cfg.top_k == 0) throw ConfigError("top_k must be >= 1");
  forecast::feature_kind_from_string(cfg.model_kind);
  fill_policy(cfg.fill_policy);
  if (cfg.task != "all") {
    parse_task(cfg.task);
  } else if (command != "benchmark") {
    throw ConfigError("task 'all' is only valid for benchmark");
  }
  if (!cfg.dataset.empty() && cfg.task != "all") require_preset(cfg.dataset, parse_task(cfg.task));
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["dataset"] = c.dataset;
  j["task"] = c.task;
  j["horizons"] = c.horizons ? nlohmann::json(*c.horizons) : nlohmann::json(nullptr);
  j["tau"] = c.tau ? nlohmann::json(*c.tau) : nlohmann::json(nullptr);
  j["reservoir_size"] = c.reservoir_size ? nlohmann::json(*c.reservoir_size) : nlohmann::json(nullptr);
  j["rhos"] = c.rhos;
  j["r_ins"] = c.r_ins;
  j["rho"] = c.rho ? nlohmann::json(*c.rho) : nlohmann::json(nullptr);
  j["r_in"] = c.r_in ? nlohmann::json(*c.r_in) : nlohmann::json(nullptr);
  j["ridge"] = c.ridge;
  j["rank_tol"] = c.rank_tol;
  j["model_kind"] = c.model_kind;
  j["fill_policy"] = c.fill_policy;
  j["refit_with_val"] = c.refit_with_val;
  j["top_k"] = c.top_k;
  j["jobs"] = c.jobs;
  j["data_dir"] = c.data_dir;
  j["cache_dir"] = c.cache_dir;
  j["out_dir"] = c.out_dir;
  j["model"] = c.model_path;
  return j;
}

RunConfig apply_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "dataset") c.dataset = v.get<std::string>();
      else if (key == "task") c.task = v.get<std::string>();
      else if (key == "horizons") c.horizons = v.is_null() ? std::nullopt : std::optional(v.get<std::vector<std::size_t>>());
      else if (key == "tau") c.tau = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
      else if (key == "reservoir_size") c.reservoir_size = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
      else if (key == "rhos") c.rhos = v.get<std::vector<double>>();
      else if (key == "r_ins") c.r_ins = v.get<std::vector<double>>();
      else if (key == "rho") c.rho = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (key == "r_in") c.r_in = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (key == "ridge") c.ridge = v.get<double>();
      else if (key == "rank_tol") c.rank_tol = v.get<double>();
      else if (key == "model_kind") c.model_kind = v.get<std::string>();
      else if (key == "fill_policy") c.fill_policy = v.get<std::string>();
      else if (key == "refit_with_val") c.refit_with_val = v.get<bool>();
      else if (key == "top_k") c.top_k = v.get<std::size_t>();
      else if (key == "jobs") c.jobs = v.get<unsigned>();
      else if (key == "data_dir") c.data_dir = v.get<std::string>();
      else if (key == "cache_dir") c.cache_dir = v.get<std::string>();
      else if (key == "out_dir") c.out_dir = v.get<std::string>();
      else if (key == "model") c.model_path = v.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

std::string config_sha256(const RunConfig& cfg) { return io::sha256_hex(to_json(cfg).dump()); }

Geometry resolve_geometry(const RunConfig& cfg, const std::string& dataset, std::size_t train_length) {
  Geometry g;
  if (dataset == "ILI") {
    g.tau = std::min({kDefaultTau, train_length / 2, kIliTauCap});
    g.reservoir_size = std::min(kDefaultReservoir, (g.tau + 1) / 2 - 1);
  }
  if (cfg.tau) g.tau = *cfg.tau;
  if (cfg.reservoir_size) g.reservoir_size = *cfg.reservoir_size;
  if (g.tau == 0 || g.reservoir_size == 0) throw ConfigError(dataset + ": training split too short for any lookback");
  return g;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reservoir motif machine forecasting pipeline", "rmm"};
  app.require_subcommand(1, 1);

  struct Flags {
    std::string config, data_dir, cache_dir, out_dir, dataset, task, model, fill_policy, model_kind;
    std::vector<std::size_t> horizons;
    std::size_t tau = 0, reservoir_size = 0, top_k = 0;
    double ridge = 0, rho = 0, r_in = 0, rank_tol = 0;
    std::vector<double> rho_grid, r_in_grid;
    unsigned jobs = 0;
    bool refit = false;
  } f;
  std::map<std::string, CLI::Option*> opts;

  auto add_shared = [&](CLI::App* sub) {
    opts["config"] = sub->add_option("--config", f.config, "JSON run configuration");
    opts["data_dir"] = sub->add_option("--data-dir", f.data_dir, "directory holding the raw CSV files");
    opts["cache_dir"] = sub->add_option("--cache-dir", f.cache_dir, "prepared dataset cache (default <data-dir>/cache)");
    opts["out_dir"] = sub->add_option("--out-dir", f.out_dir, "output directory");
    opts["dataset"] = sub->add_option("--dataset", f.dataset, "dataset preset id");
    opts["task"] = sub->add_option("--task", f.task, "univariate | multivariate (benchmark also: all)");
    opts["horizons"] = sub->add_option("--horizon", f.horizons, "forecast horizon(s)")->delimiter(',');
    opts["tau"] = sub->add_option("--tau", f.tau, "lookback window length");
    opts["reservoir_size"] = sub->add_option("--reservoir-size", f.reservoir_size, "reservoir size N");
    opts["ridge"] = sub->add_option("--ridge", f.ridge, "ridge coefficient");
    opts["refit_with_val"] = sub->add_flag("--refit-with-val", f.refit, "refit the selected model on train+val");
    opts["top_k"] = sub->add_option("--top-k", f.top_k, "number of motifs to plot");
    opts["rho"] = sub->add_option("--rho", f.rho, "cycle weight for a single configuration");
    opts["r_in"] = sub->add_option("--r-in", f.r_in, "input weight for a single configuration");
    opts["rhos"] = sub->add_option("--rho-grid", f.rho_grid, "cycle weight grid")->delimiter(',');
    opts["r_ins"] = sub->add_option("--r-in-grid", f.r_in_grid, "input weight grid")->delimiter(',');
    opts["model"] = sub->add_option("--model", f.model, "fitted model file");
    opts["jobs"] = sub->add_option("--jobs", f.jobs, "parallel grid points (0: all cores)");
    opts["fill_policy"] = sub->add_option("--fill-policy", f.fill_policy, "reject | ffill");
    opts["model_kind"] = sub->add_option("--model-kind", f.model_kind, "rmm | lrc");
    opts["rank_tol"] = sub->add_option("--rank-tol", f.rank_tol, "relative eigenvalue cutoff for motifs");
  };

  using Command = void (*)(const RunConfig&, Ledger&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"prepare", "ingest, split and cache a dataset", cmd_prepare},
      {"motifs", "export motif basis, spectrum and plots", cmd_motifs},
      {"train", "fit one configuration per horizon", cmd_train},
      {"evaluate", "score a saved model on val and test", cmd_evaluate},
      {"gridsearch", "select rho and r_in on validation, report test", cmd_gridsearch},
      {"benchmark", "run the benchmark suites against published baselines", cmd_benchmark},
  };
  std::vector<std::map<std::string, CLI::Option*>> per_command;
  for (const auto& [name, help, fn] : commands) {
    add_shared(app.add_subcommand(name, help));
    per_command.push_back(opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kConfig;
  }

  std::size_t which = 0;
  for (; which < commands.size(); ++which)
    if (app.got_subcommand(std::get<0>(commands[which]))) break;
  const std::string command = std::get<0>(commands[which]);
  auto& o = per_command[which];
  auto given = [&](const char* key) { return o.at(key)->count() > 0; };

  try {
    RunConfig cfg;
    std::optional<fs::path> config_file;
    if (given("config")) {
      config_file = f.config;
      try {
        cfg = apply_json(nlohmann::json::parse(io::read_file(f.config)), cfg);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(f.config + ": " + e.what());
      }
    }
    if (const char* env = std::getenv("RMM_DATA_DIR"); env && *env) cfg.data_dir = env;
    if (given("data_dir")) cfg.data_dir = f.data_dir;
    if (given("cache_dir")) cfg.cache_dir = f.cache_dir;
    if (given("out_dir")) cfg.out_dir = f.out_dir;
    if (given("dataset")) cfg.dataset = f.dataset;
    if (given("task")) cfg.task = f.task;
    if (given("horizons")) cfg.horizons = f.horizons;
    if (given("tau")) cfg.tau = f.tau;
    if (given("reservoir_size")) cfg.reservoir_size = f.reservoir_size;
    if (given("ridge")) cfg.ridge = f.ridge;
    if (given("refit_with_val")) cfg.refit_with_val = f.refit;
    if (given("top_k")) cfg.top_k = f.top_k;
    if (given("rho")) cfg.rho = f.rho;
    if (given("r_in")) cfg.r_in = f.r_in;
    if (given("rhos")) cfg.rhos = f.rho_grid;
    if (given("r_ins")) cfg.r_ins = f.r_in_grid;
    if (given("model")) cfg.model_path = f.model;
    if (given("jobs")) cfg.jobs = f.jobs;
    if (given("fill_policy")) cfg.fill_policy = f.fill_policy;
    if (given("model_kind")) cfg.model_kind = f.model_kind;
    if (given("rank_tol")) cfg.rank_tol = f.rank_tol;
    validate(cfg, command);

    Ledger ledger;
    ledger.out_dir = cfg.out_dir;
    if (config_file) ledger.input(*config_file);
    std::get<2>(commands[which])(cfg, ledger, out);
    ledger.write("config.json", to_json(cfg).dump(2) + "\n");
    write_manifest(ledger, command, cfg);
    out << "outputs in " << cfg.out_dir << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace rmm::cli
