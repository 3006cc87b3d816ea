// pird: command-line front end for partial information rate decomposition.
//
//   pird simulate  --setting 1 --d 0.5 --n 4096 --seed 7 --out run/
//   pird decompose --input data.csv --target soi --sources nino34,tsa --out run/
//   pird sweep     --setting 2 --out run/
//   pird surrogate --input data.csv --target soi --sources nino34,tsa --out run/
//
// Exit codes: 0 success, 2 usage, 3 data, 4 numerical degeneracy.

#include <CLI11.hpp>
#include <Eigen/Core>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pird/pird_all.hpp"

namespace fs = std::filesystem;
using namespace pird;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct Common {
  std::string out_dir = ".";
  std::string units = "nats";
  std::uint64_t seed = 0;
};

struct DataOptions {
  std::string input;
  std::string model;
  std::vector<std::string> columns;
  std::string date_column = "date";
  std::optional<double> missing;
  bool detrend = false;
  int season_period = 0;
  bool deseasonalize_first = false;
  std::string target;
  std::vector<std::string> sources;
  int order = -1;
  int max_order = 20;
  int grid = kDefaultGridPoints;
  std::vector<double> band;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return kExitUsage;
    case ErrorKind::data: return kExitData;
    case ErrorKind::numerical: return kExitNumerical;
  }
  return 1;
}

/// Runs one pipeline step, prefixing errors with the step name.
template <class F>
auto step(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  }
}

Units parse_units(const std::string& s) { return s == "bits" ? Units::bits : Units::nats; }

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create output directory " + dir + ": " + ec.message());
  }
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const Common& common, const std::vector<std::string>& outputs,
                    const std::vector<std::string>& argv) {
  json m;
  m["command"] = command;
  m["argv"] = argv;
  m["config"] = config;
  m["seed"] = common.seed;
  m["units"] = common.units;
  m["version"] = PIRD_VERSION;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["design"] = design_metadata();
  m["outputs"] = outputs;
  write_json(dir / "manifest.json", m);
}

/// Channel named by label, or by 1-based position when the name is an integer.
Index resolve_channel(const std::string& name, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == name) return static_cast<Index>(i);
  }
  int pos = 0;
  const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), pos);
  if (ec == std::errc() && ptr == name.data() + name.size()) {
    if (pos < 1 || pos > static_cast<int>(labels.size())) {
      throw SizeError("channel number " + name + " outside 1.." + std::to_string(labels.size()));
    }
    return pos - 1;
  }
  throw SizeError("unknown channel '" + name + "'");
}

struct Roles {
  Index target;
  std::vector<Index> sources;
};

/// Defaults: last channel is the target, every other channel a source.
Roles resolve_roles(const DataOptions& o, const std::vector<std::string>& labels) {
  Roles r;
  r.target = o.target.empty() ? static_cast<Index>(labels.size()) - 1
                              : resolve_channel(o.target, labels);
  if (o.sources.empty()) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (static_cast<Index>(i) != r.target) r.sources.push_back(static_cast<Index>(i));
    }
  } else {
    for (const auto& s : o.sources) r.sources.push_back(resolve_channel(s, labels));
  }
  return r;
}

std::optional<Band> band_of(const DataOptions& o) {
  if (o.band.empty()) return std::nullopt;
  const Band b{o.band[0], o.band[1]};
  if (!(b.lo >= 0.0 && b.hi <= std::numbers::pi && b.lo < b.hi)) {
    throw RangeError("--band must satisfy 0 <= lo < hi <= pi");
  }
  return b;
}

TimeSeriesSet load_series(const DataOptions& o) {
  DatasetSpec spec;
  spec.path = o.input;
  spec.columns = o.columns;
  spec.date_column = o.date_column;
  spec.missing_value = o.missing;
  auto series = step("load", [&] { return load_csv(spec); });
  Preprocessing steps;
  steps.detrend = o.detrend;
  steps.season_period = o.season_period;
  steps.deseasonalize_first = o.deseasonalize_first;
  return step("preprocess", [&] { return preprocess(std::move(series), steps); });
}

json data_config(const DataOptions& o) {
  json c = {{"input", o.input},
            {"model", o.model},
            {"columns", o.columns},
            {"date_column", o.date_column},
            {"detrend", o.detrend},
            {"deseasonalize_period", o.season_period},
            {"deseasonalize_first", o.deseasonalize_first},
            {"target", o.target},
            {"sources", o.sources},
            {"max_order", o.max_order},
            {"grid_points", o.grid},
            {"band", o.band}};
  c["missing"] = o.missing ? json(*o.missing) : json(nullptr);
  c["order"] = o.order >= 0 ? json(o.order) : json("aic");
  return c;
}

/// allow_model: decompose also accepts --model and a fixed --order.
void add_data_options(CLI::App* cmd, DataOptions& o, bool allow_model) {
  auto* input = cmd->add_option("--input", o.input, "CSV file, header row then one row per sample")
                    ->check(CLI::ExistingFile);
  if (allow_model) {
    auto* model = cmd->add_option("--model", o.model, "VAR model JSON (as written by simulate)")
                      ->check(CLI::ExistingFile);
    input->excludes(model);
    model->excludes(input);
  } else {
    input->required();
  }
  cmd->add_option("--columns", o.columns, "columns to load, in order")->delimiter(',');
  cmd->add_option("--date-column", o.date_column, "date column name");
  cmd->add_option("--missing", o.missing, "value marking a missing observation");
  cmd->add_flag("--detrend", o.detrend, "remove a linear trend from each channel");
  cmd->add_option("--deseasonalize", o.season_period, "subtract per-phase means (period)")
      ->check(CLI::Range(2, 100000));
  cmd->add_flag("--deseasonalize-first", o.deseasonalize_first,
                "deseasonalize before detrending");
  cmd->add_option("--target", o.target, "target channel (label or 1-based number)");
  cmd->add_option("--sources", o.sources, "source channels")->delimiter(',');
  auto* max_order = cmd->add_option("--max-order", o.max_order, "largest order tried by AIC")
                        ->check(CLI::Range(1, 1000));
  if (allow_model) {
    // Surrogate runs always re-select the order.
    cmd->add_option("--order", o.order, "fixed VAR order")
        ->check(CLI::Range(0, 1000))
        ->excludes(max_order);
  }
  cmd->add_option("--grid", o.grid, "frequency grid points on [0, pi]")
      ->check(CLI::Range(2, 1 << 22));
  cmd->add_option("--band", o.band, "integration band lo hi (radians/sample)")
      ->expected(2)
      ->check(CLI::Range(0.0, std::numbers::pi));
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out_dir, "output directory");
  cmd->add_option("--units", c.units, "nats or bits")->check(CLI::IsMember({"nats", "bits"}));
  cmd->add_option("--seed", c.seed, "master random seed");
}

// -- subcommands --------------------------------------------------------------

struct SimulateOptions {
  int setting = 0;
  double d = 0.0;
  std::string model;
  Index n = 4096;
  Index burn_in = kDefaultBurnIn;
};

int run_simulate(const SimulateOptions& o, const Common& c, const std::vector<std::string>& argv) {
  VarModel model = o.model.empty()
                       ? build_model(static_cast<SweepSetting>(o.setting), o.d)
                       : step("model", [&] {
                           std::ifstream in(o.model);
                           return var_model_from_json(json::parse(in, nullptr, true));
                         });
  auto series = step("simulate", [&] { return simulate(model, o.n, o.burn_in, c.seed); });
  if (o.model.empty()) series.labels = {"X1", "X2", "Y"};

  const auto dir = prepare_out_dir(c.out_dir);
  {
    auto out = open_out(dir / "series.csv");
    write_csv(out, series);
  }
  write_json(dir / "model.json", to_json(model));
  json config = {{"n", o.n}, {"burn_in", o.burn_in}};
  if (o.model.empty()) {
    config["setting"] = o.setting;
    config["d"] = o.d;
  } else {
    config["model"] = o.model;
  }
  write_manifest(dir, "simulate", config, c, {"series.csv", "model.json"}, argv);
  return 0;
}

int run_decompose(const DataOptions& o, const Common& c, const std::vector<std::string>& argv) {
  const auto band = band_of(o);
  const double scale = unit_scale(parse_units(c.units));
  VarModel model = VarModel::white_noise(MatrixXd::Identity(1, 1));
  MatrixXd cov0;
  std::vector<std::string> labels;
  json fit;
  if (!o.model.empty()) {
    model = step("model", [&] {
      std::ifstream in(o.model);
      try {
        return var_model_from_json(json::parse(in));
      } catch (const json::parse_error& e) {
        throw DataError(std::string("invalid JSON: ") + e.what());
      }
    });
    for (Index i = 0; i < model.dim(); ++i) labels.push_back("s" + std::to_string(i + 1));
    cov0 = step("covariance", [&] { return zero_lag_covariance(model); });
    fit = {{"source", "model"}, {"order", model.order()}};
  } else {
    const auto series = load_series(o);
    labels = series.labels;
    int order = o.order;
    json aic = nullptr;
    if (order < 0) {
      const auto sel = step("order selection",
                            [&] { return select_order_detailed(series, o.max_order); });
      order = sel.order;
      aic = sel.aic;
    }
    model = step("estimation", [&] { return estimate(series, order); });
    cov0 = sample_covariance(series.samples);
    fit = {{"source", "estimated"}, {"order", order}, {"aic", aic},
           {"n_samples", series.n_samples()}};
  }
  const auto roles = resolve_roles(o, labels);
  const auto result = step("decomposition", [&] {
    return decompose(model, roles.target, roles.sources, FrequencyGrid(o.grid), band);
  });
  const auto pid = step("static PID", [&] {
    return static_decomposition(cov0, roles.target, roles.sources);
  });

  const auto dir = prepare_out_dir(c.out_dir);
  json pj = to_json(result, scale);
  pj["units"] = c.units;
  pj["fit"] = fit;
  pj["labels"] = labels;
  write_json(dir / "pird.json", pj);
  json sj = to_json(pid, scale);
  sj["units"] = c.units;
  write_json(dir / "static_pid.json", sj);
  {
    auto out = open_out(dir / "profiles.csv");
    write_profiles_csv(out, result, scale);
  }
  write_manifest(dir, "decompose", data_config(o), c,
                 {"pird.json", "static_pid.json", "profiles.csv"}, argv);
  return 0;
}

struct SweepOptions {
  int setting = 1;
  std::vector<double> d_grid;
  int grid = kDefaultGridPoints;
  bool estimate = false;
  Index n = 4096;
  int max_order = 10;
};

int run_sweep_cmd(const SweepOptions& o, const Common& c, const std::vector<std::string>& argv) {
  SweepConfig cfg;
  cfg.setting = static_cast<SweepSetting>(o.setting);
  if (!o.d_grid.empty()) cfg.d_grid = o.d_grid;
  cfg.grid_points = o.grid;
  cfg.estimate = o.estimate;
  cfg.n_samples = o.n;
  cfg.seed = c.seed;
  cfg.max_order = o.max_order;
  const auto result = step("sweep", [&] { return run_sweep(cfg); });

  const auto dir = prepare_out_dir(c.out_dir);
  {
    auto out = open_out(dir / "sweep.csv");
    write_sweep_csv(out, result, unit_scale(parse_units(c.units)));
  }
  json config = {{"setting", o.setting},  {"d_grid", cfg.d_grid},
                 {"grid_points", o.grid}, {"estimate", o.estimate},
                 {"n", o.n},              {"max_order", o.max_order}};
  write_manifest(dir, "sweep", config, c, {"sweep.csv"}, argv);
  return 0;
}

struct SurrogateOptions {
  int n_surrogates = 100;
  double alpha = 0.05;
};

int run_surrogate(const DataOptions& o, const SurrogateOptions& s, const Common& c,
                  const std::vector<std::string>& argv) {
  const auto band = band_of(o);
  const auto series = load_series(o);
  const auto roles = resolve_roles(o, series.labels);
  SignificanceOptions opts;
  opts.n_surrogates = s.n_surrogates;
  opts.alpha = s.alpha;
  opts.seed = c.seed;
  opts.max_order = o.max_order;
  opts.grid_points = o.grid;
  opts.band = band;
  const auto report = step("surrogates", [&] {
    return significance(series, roles.target, roles.sources, opts);
  });

  const double scale = unit_scale(parse_units(c.units));
  const auto dir = prepare_out_dir(c.out_dir);
  json j = to_json(report, scale);
  j["units"] = c.units;
  j["labels"] = series.labels;
  write_json(dir / "significance.json", j);
  {
    auto out = open_out(dir / "surrogates.csv");
    write_surrogate_csv(out, report, scale);
  }
  json config = data_config(o);
  config["n_surrogates"] = s.n_surrogates;
  config["alpha"] = s.alpha;
  write_manifest(dir, "surrogate", config, c, {"significance.json", "surrogates.csv"}, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial information rate decomposition for Gaussian VAR processes", "pird"};
  app.set_version_flag("--version", PIRD_VERSION);
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  Common common;

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "simulate a three-node benchmark system");
  auto* setting_opt = simulate_cmd->add_option("--setting", sim.setting, "1 or 2")
                          ->check(CLI::IsMember({1, 2}));
  simulate_cmd->add_option("--d", sim.d, "modulation parameter")
      ->check(CLI::Range(0.0, 1.0).description("d must lie in [0, 1]"));
  auto* sim_model = simulate_cmd->add_option("--model", sim.model, "VAR model JSON to simulate")
                        ->check(CLI::ExistingFile);
  setting_opt->excludes(sim_model);
  simulate_cmd->add_option("--n", sim.n, "number of samples")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--burn-in", sim.burn_in, "discarded initial samples")
      ->check(CLI::NonNegativeNumber);
  add_common(simulate_cmd, common);

  DataOptions dec;
  auto* decompose_cmd = app.add_subcommand("decompose", "decompose a dataset or a model");
  add_data_options(decompose_cmd, dec, true);
  add_common(decompose_cmd, common);

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a modulation sweep on a benchmark system");
  sweep_cmd->add_option("--setting", sw.setting, "1 or 2")->check(CLI::IsMember({1, 2}));
  sweep_cmd->add_option("--d-grid", sw.d_grid, "d values (default 0:0.05:1)")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0).description("d must lie in [0, 1]"));
  sweep_cmd->add_option("--grid", sw.grid, "frequency grid points")->check(CLI::Range(2, 1 << 22));
  sweep_cmd->add_flag("--estimate", sw.estimate, "simulate and analyze estimated models");
  sweep_cmd->add_option("--n", sw.n, "samples per simulated system")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--max-order", sw.max_order, "largest order tried by AIC")
      ->check(CLI::Range(1, 1000));
  add_common(sweep_cmd, common);

  DataOptions sur;
  SurrogateOptions sur_opts;
  auto* surrogate_cmd = app.add_subcommand("surrogate", "shuffle-surrogate significance test");
  add_data_options(surrogate_cmd, sur, false);
  surrogate_cmd->add_option("--n-surrogates", sur_opts.n_surrogates, "number of surrogates")
      ->check(CLI::Range(20, 1000000).description("at least 20 surrogates"));
  surrogate_cmd->add_option("--alpha", sur_opts.alpha, "two-sided significance level")
      ->check(CLI::Range(0.0, 1.0));
  add_common(surrogate_cmd, common);

  try {
    app.parse(argc, argv);
    if (simulate_cmd->parsed() && sim.model.empty() && sim.setting == 0) {
      throw CLI::ValidationError("--setting", "simulate needs --setting or --model");
    }
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (simulate_cmd->parsed()) return run_simulate(sim, common, args);
    if (decompose_cmd->parsed()) {
      if (dec.input.empty() && dec.model.empty()) {
        throw IncompleteInputError("decompose needs --input or --model");
      }
      return run_decompose(dec, common, args);
    }
    if (sweep_cmd->parsed()) return run_sweep_cmd(sw, common, args);
    if (surrogate_cmd->parsed()) return run_surrogate(sur, sur_opts, common, args);
  } catch (const Error& e) {
    std::cerr << "pird: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "pird: invalid JSON: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
