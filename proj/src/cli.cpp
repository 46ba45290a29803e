#include "npvi/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "npvi/baselines.hpp"
#include "npvi/error.hpp"
#include "npvi/fit.hpp"
#include "npvi/hmc.hpp"
#include "npvi/models/gaussian.hpp"
#include "npvi/models/logistic.hpp"
#include "npvi/models/t_mixture.hpp"
#include "npvi/models/tlsa.hpp"
#include "npvi/serialization.hpp"

namespace npvi::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kValidEngines = "npv, map, laplace, hmc";
constexpr const char* kValidModels = "gaussian, t_mixture, logistic, tlsa";

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::vector<std::string> overrides;  // key=value on top-level scalars
};

// Parsed configuration plus the directory relative paths resolve against.
struct Config {
  json doc;
  fs::path base_dir;
  std::uint64_t seed = 0;
};

Config load_config(const CommonOptions& opts) {
  Config cfg;
  if (!opts.config_path.empty()) {
    const fs::path path(opts.config_path);
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
    try {
      cfg.doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg.base_dir = path.parent_path();
  } else {
    cfg.doc = json::object();
  }
  if (!cfg.doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string raw = kv.substr(eq + 1);
    if (cfg.doc.contains(key) && cfg.doc[key].is_structured())
      throw ConfigError("--set only overrides scalar fields; '" + key + "' is structured");
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    if (value.is_structured()) throw ConfigError("--set value for '" + key + "' must be scalar");
    cfg.doc[key] = value;
  }
  if (opts.seed) cfg.doc["seed"] = *opts.seed;
  cfg.seed = cfg.doc.value("seed", std::uint64_t{0});
  return cfg;
}

fs::path resolve(const Config& cfg, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = cfg.base_dir / path;
  if (!fs::exists(path)) throw ConfigError("referenced file not found: " + path.string());
  return path;
}

Vector to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

// ---------------------------------------------------------------- models

struct LoadedModel {
  std::string type;
  ModelPtr model;
  std::optional<LogisticModelSpec> logistic;
  std::optional<TlsaModelSpec> tlsa;
};

const json& model_section(const Config& cfg) {
  if (!cfg.doc.contains("model") || !cfg.doc["model"].is_object())
    throw ConfigError("config needs a \"model\" object");
  return cfg.doc["model"];
}

DatasetTable load_table(const Config& cfg, const json& m) {
  if (!m.contains("data")) throw ConfigError("model needs a \"data\" CSV path");
  return dataset_from_csv(read_file(resolve(cfg, m["data"].get<std::string>())));
}

TMixtureSpec t_mixture_spec_from(const json& m) {
  if (!m.contains("components")) return canonical_t_mixture_spec();
  TMixtureSpec spec;
  for (const auto& c : m["components"]) {
    TComponent comp;
    const Vector loc = to_vector(c.at("location"), "location");
    if (loc.size() != 2) throw ConfigError("t component location must have 2 entries");
    comp.location = loc;
    const auto& s = c.at("scale");
    comp.scale << s.at(0).at(0).get<double>(), s.at(0).at(1).get<double>(),
        s.at(1).at(0).get<double>(), s.at(1).at(1).get<double>();
    comp.dof = c.value("dof", 5.0);
    if (c.contains("skew")) comp.skew = to_vector(c["skew"], "skew");
    spec.components.push_back(comp);
  }
  if (m.contains("weights")) {
    spec.weights = m["weights"].get<std::vector<double>>();
  } else {
    spec.weights.assign(spec.components.size(), 1.0 / static_cast<double>(spec.components.size()));
  }
  return spec;
}

TlsaModelSpec tlsa_spec_from(const json& m, const DatasetTable& table) {
  if (table.is_classification()) throw ConfigError("TLSA needs voxel columns v1..vV");
  TlsaModelSpec spec;
  spec.num_sources = m.value("sources", Index{3});
  const Index side = m.value("grid", Index{10});
  spec.voxel_locations = tlsa_voxel_grid(side);
  if (table.targets.cols() != spec.voxel_locations.rows())
    throw ConfigError("data has " + std::to_string(table.targets.cols()) +
                      " voxel columns but the grid has " +
                      std::to_string(spec.voxel_locations.rows()) + " voxels");
  spec.covariates = table.covariates;
  spec.activations = table.targets;
  spec.tau = m.value("tau", 1.0);
  spec.weight_variance = m.value("weight_variance", 5.0);
  spec.width_rate = m.value("width_rate", 1.0);
  spec.validate();
  return spec;
}

// Builds the model; for data-driven models `table` overrides the data file.
LoadedModel build_model(const Config& cfg, const std::optional<DatasetTable>& table = {}) {
  const json& m = model_section(cfg);
  LoadedModel out;
  out.type = m.value("type", std::string());
  if (out.type == "gaussian") {
    const Vector mean = m.contains("mean") ? to_vector(m["mean"], "mean") : Vector::Zero(1);
    const Vector var = m.contains("variance") ? to_vector(m["variance"], "variance")
                                              : Vector::Ones(mean.size());
    out.model = gaussian_target(mean, var);
  } else if (out.type == "t_mixture") {
    out.model = t_mixture_target(t_mixture_spec_from(m));
  } else if (out.type == "logistic") {
    LogisticModelSpec spec;
    spec.a = m.value("a", 1.0);
    spec.b = m.value("b", 0.01);
    spec.data = table ? *table : load_table(cfg, m);
    if (!spec.data.is_classification()) throw ConfigError("logistic data needs a label column");
    out.model = logistic_log_joint(spec);
    out.logistic = std::move(spec);
  } else if (out.type == "tlsa") {
    const DatasetTable data = table ? *table : load_table(cfg, m);
    out.tlsa = tlsa_spec_from(m, data);
    out.model = tlsa_log_joint(*out.tlsa);
  } else {
    throw ConfigError("unknown model type '" + out.type + "'; valid models: " + kValidModels);
  }
  return out;
}

// --------------------------------------------------------------- engines

struct EngineRun {
  std::string type;
  std::optional<FitResult> npv;
  std::optional<MapResult> map;
  std::optional<DiagonalGaussian> laplace;
  std::optional<PosteriorSamples> hmc;
  double wall_time = 0.0;
};

void check_engine_type(const std::string& type) {
  if (type != "npv" && type != "map" && type != "laplace" && type != "hmc")
    throw ConfigError("unknown engine '" + type + "'; valid engines: " + kValidEngines);
}

NpvConfig npv_config_from(const json& e, std::uint64_t seed) {
  NpvConfig c;
  c.seed = seed;
  c.num_components = e.value("num_components", Index{1});
  c.tolerance = e.value("tolerance", c.tolerance);
  c.max_outer_iterations = e.value("max_outer_iterations", c.max_outer_iterations);
  c.mean_init_scale = e.value("mean_init_scale", c.mean_init_scale);
  c.initial_sigma = e.value("initial_sigma", c.initial_sigma);
  if (e.contains("sigma_min")) c.log_sigma_min = std::log(e["sigma_min"].get<double>());
  if (e.contains("sigma_max")) c.log_sigma_max = std::log(e["sigma_max"].get<double>());
  c.freeze_bandwidths = e.value("freeze_bandwidths", false);
  c.batch_means = e.value("batch_means", false);
  c.mean_options.max_iterations = e.value("mean_iterations", c.mean_options.max_iterations);
  c.sigma_options.max_iterations = e.value("sigma_iterations", c.sigma_options.max_iterations);
  return c;
}

MapOptions map_options_from(const json& e, std::uint64_t seed) {
  MapOptions o;
  o.seed = seed;
  o.restarts = e.value("restarts", o.restarts);
  o.start_scale = e.value("start_scale", o.start_scale);
  return o;
}

HmcConfig hmc_config_from(const json& e, std::uint64_t seed, Index dim) {
  HmcConfig h;
  h.seed = seed;
  h.step_size = e.value("step_size", h.step_size);
  h.leapfrog_steps = e.value("leapfrog_steps", h.leapfrog_steps);
  h.num_samples = e.value("num_samples", h.num_samples);
  h.keep_last = e.value("keep_last", h.keep_last);
  if (e.contains("initial")) {
    h.initial = to_vector(e["initial"], "initial");
    if (h.initial->size() != dim) throw ConfigError("HMC initial state has the wrong length");
  }
  h.validate();
  return h;
}

// Validates engine settings and model capabilities before anything runs.
void validate_engine(const json& e, const LogJointModel& model, std::uint64_t seed) {
  if (!e.is_object()) throw ConfigError("engine must be a JSON object");
  const std::string type = e.value("type", std::string());
  check_engine_type(type);
  if (type == "npv") {
    npv_config_from(e, seed).validate();
    if (!model.has_gradient() || !model.has_hessian_diag())
      throw ConfigError("engine npv needs a model with gradient and Hessian diagonal");
  } else if (type == "map" || type == "laplace") {
    if (map_options_from(e, seed).restarts < 1) throw ConfigError("restarts must be >= 1");
    if (!model.has_gradient()) throw ConfigError("engine " + type + " needs the model gradient");
  } else {
    hmc_config_from(e, seed, model.dimension());
  }
}

EngineRun run_engine(const json& e, const LogJointModel& model, std::uint64_t seed) {
  EngineRun run;
  run.type = e.value("type", std::string());
  const auto started = std::chrono::steady_clock::now();
  if (run.type == "npv") {
    run.npv = fit(model, npv_config_from(e, seed));
  } else if (run.type == "map") {
    run.map = map_estimate(model, map_options_from(e, seed));
  } else if (run.type == "laplace") {
    run.map = map_estimate(model, map_options_from(e, seed));
    try {
      run.laplace = laplace_diagonal(model, run.map->theta);
    } catch (const InputError& err) {
      throw NumericalError(err.what());
    }
  } else {
    run.hmc = hmc_sample(model, hmc_config_from(e, seed, model.dimension()));
  }
  run.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return run;
}

std::vector<Vector> predictive_samples(const EngineRun& run, std::size_t count,
                                       std::uint64_t seed) {
  if (run.npv) return sample_mixture(run.npv->mixture, count, seed);
  if (run.laplace) return sample_diagonal_gaussian(*run.laplace, count, seed);
  if (run.map) return {run.map->theta};
  return run.hmc->samples;
}

std::string diagnostics(const EngineRun& run) {
  if (run.npv) {
    return "initial_l2=" + format_double(run.npv->l2_trace.front()) +
           ";final_l2=" + format_double(run.npv->l2_trace.back()) +
           ";outer_iterations=" + std::to_string(run.npv->outer_iterations) +
           ";converged=" + (run.npv->converged ? "1" : "0");
  }
  if (run.laplace) return "log_joint=" + format_double(run.map->log_joint);
  if (run.map) {
    return "log_joint=" + format_double(run.map->log_joint) +
           ";gradient_norm=" + format_double(run.map->gradient_norm);
  }
  return "acceptance_rate=" + format_double(run.hmc->acceptance_rate);
}

fs::path prepare_out(const CommonOptions& opts) {
  fs::path out(opts.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out.string());
  return out;
}

// --------------------------------------------------------------- commands

int cmd_fit(const CommonOptions& opts) {
  const Config cfg = load_config(opts);
  const LoadedModel loaded = build_model(cfg);
  if (!cfg.doc.contains("engine")) throw ConfigError("config needs an \"engine\" object");
  const json& engine = cfg.doc["engine"];
  validate_engine(engine, *loaded.model, cfg.seed);
  const fs::path out = prepare_out(opts);

  const EngineRun run = run_engine(engine, *loaded.model, cfg.seed);
  json manifest = {{"command", "fit"},
                   {"config", cfg.doc},
                   {"seed", cfg.seed},
                   {"engine", run.type},
                   {"model", loaded.type},
                   {"wall_time", run.wall_time}};
  if (run.npv) {
    write_file_atomic(out / "approximation.json", mixture_to_json(run.npv->mixture));
    std::string trace = "iteration,l2\n";
    for (std::size_t i = 0; i < run.npv->l2_trace.size(); ++i)
      trace += std::to_string(i) + "," + format_double(run.npv->l2_trace[i]) + "\n";
    write_file_atomic(out / "trace.csv", trace);
    manifest["converged"] = run.npv->converged;
    manifest["outer_iterations"] = run.npv->outer_iterations;
    manifest["warnings"] = run.npv->warnings;
  } else if (run.laplace) {
    json j = {{"engine", "laplace"}, {"mean", to_json(run.laplace->mean)},
              {"variances", to_json(run.laplace->variances)}};
    write_file_atomic(out / "approximation.json", j.dump(2) + "\n");
    manifest["converged"] = true;
  } else if (run.map) {
    json j = {{"engine", "map"}, {"theta", to_json(run.map->theta)},
              {"log_joint", run.map->log_joint}, {"gradient_norm", run.map->gradient_norm}};
    write_file_atomic(out / "approximation.json", j.dump(2) + "\n");
    manifest["converged"] = run.map->gradient_norm < 1e-5;
  } else {
    write_file_atomic(out / "samples.csv", samples_to_csv(run.hmc->samples));
    json j = {{"engine", "hmc"}, {"acceptance_rate", run.hmc->acceptance_rate},
              {"kept", run.hmc->samples.size()}};
    write_file_atomic(out / "approximation.json", j.dump(2) + "\n");
    manifest["converged"] = true;
  }
  write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  return kExitOk;
}

struct GridOptions {
  std::string approximation;
  std::string bounds;
  std::optional<int> resolution;
};

int cmd_density_grid(const CommonOptions& opts, const GridOptions& grid) {
  const Config cfg = load_config(opts);
  std::string approx_path = grid.approximation;
  if (approx_path.empty()) approx_path = cfg.doc.value("approximation", std::string());
  if (approx_path.empty()) throw ConfigError("density-grid needs an approximation file");
  const fs::path approx_file = grid.approximation.empty() ? resolve(cfg, approx_path)
                                                          : fs::path(approx_path);
  if (!fs::exists(approx_file)) throw ConfigError("approximation file not found: " + approx_path);
  MixtureApproximation q = [&] {
    try {
      return mixture_from_json(read_file(approx_file));
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }();
  if (q.dimension() != 2)
    throw ConfigError("density-grid needs a 2-dimensional approximation, got " +
                      std::to_string(q.dimension()));

  std::vector<double> b;
  if (!grid.bounds.empty()) {
    std::stringstream ss(grid.bounds);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        b.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("cannot parse --bounds entry '" + item + "'");
      }
    }
  } else if (cfg.doc.contains("bounds")) {
    b = cfg.doc["bounds"].get<std::vector<double>>();
  } else {
    b = {-5.0, 5.0, -5.0, 5.0};
  }
  if (b.size() != 4 || !(b[0] < b[1]) || !(b[2] < b[3]))
    throw ConfigError("bounds must be xmin,xmax,ymin,ymax with min < max");
  const int res = grid.resolution.value_or(cfg.doc.value("resolution", 101));
  if (res < 16) throw ConfigError("resolution must be at least 16");

  const fs::path out = prepare_out(opts);
  std::string csv = "x,y,density\n";
  Vector theta(2);
  for (int i = 0; i < res; ++i) {
    const double x = b[0] + (b[1] - b[0]) * i / (res - 1);
    for (int j = 0; j < res; ++j) {
      const double y = b[2] + (b[3] - b[2]) * j / (res - 1);
      theta << x, y;
      csv += format_double(x) + "," + format_double(y) + "," +
             format_double(std::exp(mixture_log_density(q, theta))) + "\n";
    }
  }
  write_file_atomic(out / "density.csv", csv);
  return kExitOk;
}

int cmd_compare(const CommonOptions& opts) {
  const Config cfg = load_config(opts);
  const json& m = model_section(cfg);
  const std::string type = m.value("type", std::string());
  if (type != "logistic" && type != "tlsa")
    throw ConfigError("compare needs a data-driven model (logistic or tlsa)");
  if (!cfg.doc.contains("engines") || !cfg.doc["engines"].is_array() ||
      cfg.doc["engines"].size() < 2)
    throw ConfigError("compare needs an \"engines\" array with at least two entries");

  const DatasetTable table = load_table(cfg, m);
  const double fraction = cfg.doc.value("split", 0.5);
  const auto [train, test] = table.split(fraction);
  const LoadedModel loaded = build_model(cfg, train);
  const auto count = cfg.doc.value("predictive_samples", std::size_t{1000});
  if (count < 1) throw ConfigError("predictive_samples must be positive");
  const std::string rule_name = cfg.doc.value("predictive_rule", std::string("average_of_log"));
  PredictiveRule rule;
  if (rule_name == "average_of_log") rule = PredictiveRule::average_of_log;
  else if (rule_name == "log_of_average") rule = PredictiveRule::log_of_average;
  else throw ConfigError("predictive_rule must be average_of_log or log_of_average");

  for (const auto& e : cfg.doc["engines"]) validate_engine(e, *loaded.model, cfg.seed);
  const fs::path out = prepare_out(opts);

  std::string metrics = "engine,metric,value,diagnostics\n";
  std::string timings = "engine,wall_time\n";
  json manifest = {{"command", "compare"}, {"config", cfg.doc}, {"seed", cfg.seed},
                   {"train_rows", train.rows()}, {"test_rows", test.rows()}};
  if (type == "tlsa") {
    const double mean = test.targets.mean();
    manifest["heldout_variance"] = (test.targets.array() - mean).square().mean();
  }
  for (const auto& e : cfg.doc["engines"]) {
    const EngineRun run = run_engine(e, *loaded.model, cfg.seed);
    const auto samples = predictive_samples(run, count, cfg.seed + 1);
    std::string metric;
    double value = 0.0;
    if (type == "logistic") {
      metric = "test_log_likelihood";
      value = logistic_test_log_likelihood(samples, test, rule);
    } else {
      metric = "heldout_mse";
      const Matrix pred = tlsa_reconstruct(samples, test.covariates, *loaded.tlsa);
      value = (pred - test.targets).array().square().mean();
    }
    metrics += run.type + "," + metric + "," + format_double(value) + "," +
               diagnostics(run) + "\n";
    timings += run.type + "," + format_double(run.wall_time) + "\n";
  }
  write_file_atomic(out / "metrics.csv", metrics);
  write_file_atomic(out / "timings.csv", timings);
  write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  return kExitOk;
}

int cmd_synth_data(const CommonOptions& opts) {
  const Config cfg = load_config(opts);
  const json& m = model_section(cfg);
  const std::string type = m.value("type", std::string());
  const fs::path out = prepare_out(opts);
  json truth;
  if (type == "logistic") {
    const Index rows = m.value("rows", Index{200});
    const Index features = m.value("features", Index{5});
    const double alpha = m.value("alpha_true", 1.0);
    Vector w;
    if (m.contains("w_true")) w = to_vector(m["w_true"], "w_true");
    Vector w_used;
    const DatasetTable t = synth_logistic(cfg.seed, rows, features, w, alpha, &w_used);
    write_file_atomic(out / "data.csv", dataset_to_csv(t));
    truth = {{"model", "logistic"}, {"alpha_true", alpha}, {"w_true", to_json(w_used)}};
  } else if (type == "tlsa") {
    TlsaModelSpec spec;
    spec.num_sources = m.value("sources", Index{3});
    spec.voxel_locations = tlsa_voxel_grid(m.value("grid", Index{10}));
    const Index rows = m.value("rows", Index{40});
    const Index classes = m.value("covariates", Index{2});
    spec.covariates = tlsa_class_covariates(cfg.seed, rows, classes);
    spec.tau = m.value("tau", 1.0);
    spec.weight_variance = m.value("weight_variance", 5.0);
    spec.width_rate = m.value("width_rate", 1.0);
    spec.activations = Matrix::Zero(rows, spec.voxel_locations.rows());
    spec.validate();
    const TlsaParameters p = sample_tlsa_prior(cfg.seed + 1, spec);
    DatasetTable t;
    t.covariates = spec.covariates;
    t.targets = synth_tlsa(cfg.seed + 2, spec, p);
    write_file_atomic(out / "data.csv", dataset_to_csv(t));
    truth = {{"model", "tlsa"}, {"weights", to_json(p.weights)},
             {"centers", to_json(p.centers)}, {"widths", to_json(p.widths)}};
  } else {
    throw ConfigError("synth-data supports the logistic and tlsa models");
  }
  write_file_atomic(out / "truth.json", truth.dump(2) + "\n");
  write_file_atomic(out / "manifest.json",
                    json({{"command", "synth-data"}, {"config", cfg.doc}, {"seed", cfg.seed}})
                            .dump(2) + "\n");
  return kExitOk;
}

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "JSON configuration file");
  sub->add_option("--seed", opts.seed, "Random seed (overrides the config)");
  sub->add_option("--out", opts.out_dir, "Output directory");
  sub->add_option("--set", opts.overrides, "Override a top-level scalar: key=value");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Nonparametric variational inference experiments", "npvi"};
  app.require_subcommand(1);
  CommonOptions opts;
  GridOptions grid;

  auto* fit_cmd = app.add_subcommand("fit", "Fit one engine to one model");
  add_common(fit_cmd, opts);
  auto* grid_cmd = app.add_subcommand("density-grid", "Evaluate a 2-D mixture on a grid");
  add_common(grid_cmd, opts);
  grid_cmd->add_option("--approximation", grid.approximation, "Mixture JSON file");
  grid_cmd->add_option("--bounds", grid.bounds, "xmin,xmax,ymin,ymax");
  grid_cmd->add_option("--resolution", grid.resolution, "Points per axis (>= 16)");
  auto* compare_cmd = app.add_subcommand("compare", "Compare engines on a train/test split");
  add_common(compare_cmd, opts);
  auto* synth_cmd = app.add_subcommand("synth-data", "Generate a synthetic dataset");
  add_common(synth_cmd, opts);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(opts);
    if (grid_cmd->parsed()) return cmd_density_grid(opts, grid);
    if (compare_cmd->parsed()) return cmd_compare(opts);
    if (synth_cmd->parsed()) return cmd_synth_data(opts);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const CapabilityError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    // ConfigError and InputError
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace npvi::cli
