// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../support.hpp"
#include "npvi/baselines.hpp"
#include "npvi/cli.hpp"
#include "npvi/elbo.hpp"
#include "npvi/fit.hpp"
#include "npvi/hmc.hpp"
#include "npvi/mixture.hpp"
#include "npvi/models/gaussian.hpp"
#include "npvi/models/logistic.hpp"
#include "npvi/models/t_mixture.hpp"
#include "npvi/models/tlsa.hpp"
#include "npvi/oracles.hpp"
#include "npvi/serialization.hpp"

namespace fs = std::filesystem;
using namespace npvi;
using npvi::testing::max_abs;
using npvi::testing::relative_error;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Fits and compare runs collected for the endpoint check.
struct Endpoint {
  std::string label;
  double initial = 0.0;
  double final = 0.0;
};
std::vector<Endpoint> g_endpoints;
std::vector<MixtureApproximation> g_mixtures;

void record(const std::string& label, const FitResult& r) {
  g_endpoints.push_back({label, r.l2_trace.front(), r.l2_trace.back()});
  g_mixtures.push_back(r.mixture);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path scratch_root() {
  const fs::path root = fs::temp_directory_path() /
                        ("npvi_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(root);
  return root;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "npvi");
  std::ostringstream err;
  const int code = cli::run(args, err);
  if (code != 0) std::fprintf(stderr, "npvi %s failed (%d): %s\n", args[1].c_str(), code,
                              err.str().c_str());
  return code;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  std::ofstream(path) << doc.dump(2) << "\n";
}

struct MetricRow {
  double value = 0.0;
  std::map<std::string, double> diagnostics;
};

std::map<std::string, MetricRow> read_metrics(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::getline(in, line);
  std::map<std::string, MetricRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    MetricRow row;
    row.value = std::stod(cells.at(2));
    std::stringstream ds(cells.size() > 3 ? cells[3] : "");
    std::string kv;
    while (std::getline(ds, kv, ';')) {
      const auto eq = kv.find('=');
      if (eq != std::string::npos) row.diagnostics[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    rows[cells.at(0)] = row;
  }
  return rows;
}

// Synthesises data for `seed` and compares npv against map on it.
std::map<std::string, MetricRow> compare_run(const fs::path& root, const std::string& kind,
                                             std::uint64_t seed, const nlohmann::json& model,
                                             Index npv_components, nlohmann::json* manifest) {
  const fs::path dir = root / (kind + "_" + std::to_string(seed));
  fs::create_directories(dir);
  write_json(dir / "synth.json", {{"seed", seed}, {"model", model}});
  if (run_cli({"synth-data", "--config", (dir / "synth.json").string(), "--out",
               (dir / "data").string()}) != 0)
    return {};
  nlohmann::json m = model;
  m["data"] = (dir / "data" / "data.csv").string();
  const nlohmann::json cfg = {
      {"seed", seed},
      {"split", 0.5},
      {"predictive_samples", 1000},
      {"model", m},
      {"engines", {{{"type", "npv"}, {"num_components", npv_components}}, {{"type", "map"}}}}};
  write_json(dir / "compare.json", cfg);
  if (run_cli({"compare", "--config", (dir / "compare.json").string(), "--out",
               (dir / "result").string()}) != 0)
    return {};
  if (manifest) *manifest = nlohmann::json::parse(read_file(dir / "result" / "manifest.json"));
  auto rows = read_metrics(dir / "result" / "metrics.csv");
  if (rows.count("npv")) {
    g_endpoints.push_back({kind + " compare seed " + std::to_string(seed),
                           rows["npv"].diagnostics["initial_l2"],
                           rows["npv"].diagnostics["final_l2"]});
  }
  return rows;
}

// ------------------------------------------------------------------ criteria

Outcome entropy_bound_property() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> dim(1, 5), count(1, 8);
  int violations = 0;
  double worst = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = npvi::testing::random_mixture(rng, count(rng), dim(rng));
    const auto mc = oracles::mc_entropy(q, 100000, 1000 + trial);
    const double gap = entropy_lower_bound(q) - (mc.estimate + 3.0 * mc.standard_error);
    worst = std::max(worst, gap);
    if (gap > 0.0) ++violations;
  }
  const double t = seconds_since(start);
  return {violations == 0 && t < 30.0,
          std::to_string(violations) + "/100 violations, worst margin " + fmt("%.3g", worst) +
              ", " + fmt("%.1f s", t)};
}

Outcome gradient_suites() {
  const auto start = Clock::now();
  std::vector<std::pair<std::string, ModelPtr>> models;
  models.emplace_back("gaussian", gaussian_target(Vector::LinSpaced(4, -1.0, 2.0),
                                                  Vector::LinSpaced(4, 0.3, 3.0)));
  models.emplace_back("t_mixture", t_mixture_target(canonical_t_mixture_spec()));
  LogisticModelSpec ls;
  ls.data = synth_logistic(5, 60, 4, {}, 1.0);
  models.emplace_back("logistic", logistic_log_joint(ls));
  models.emplace_back("tlsa", tlsa_log_joint(npvi::testing::small_tlsa_spec(6, 5, 3, 2, 8)));

  std::mt19937_64 rng(777);
  double worst_l1 = 0.0, worst_l2 = 0.0, worst_g = 0.0, worst_h = 0.0;
  int instances = 0;
  for (const auto& [name, model] : models) {
    const Index d = model->dimension();
    for (int trial = 0; trial < 20; ++trial, ++instances) {
      const auto q = npvi::testing::random_mixture(rng, 1 + trial % 4, d, 0.7);
      const Index m = trial % q.size();
      const Vector fd1 = oracles::fd_gradient(
          [&](const Vector& mu) {
            auto w = q;
            w.set_mean(m, mu);
            return elbo_l1(w, *model);
          },
          q.mean(m));
      worst_l1 = std::max(worst_l1, relative_error(grad_l1_mean(q, *model, m), fd1));
      const Vector fd2 = oracles::fd_gradient(
          [&](const Vector& s) {
            auto w = q;
            w.set_log_sigmas(s);
            return elbo_l2(w, *model);
          },
          q.log_sigmas());
      worst_l2 = std::max(worst_l2, relative_error(grad_l2_log_sigma(q, *model), fd2));

      const Vector theta = q.mean(m);
      Vector g, h;
      model->eval(theta, &g, &h);
      worst_g = std::max(worst_g, relative_error(g, npvi::testing::fd_model_gradient(*model, theta)));
      worst_h = std::max(worst_h,
                         relative_error(h, npvi::testing::fd_hessian_from_gradient(*model, theta)));
    }
  }
  const double t = seconds_since(start);
  const double worst = std::max({worst_l1, worst_l2, worst_g, worst_h});
  return {worst < 1e-5 && t < 60.0,
          std::to_string(instances) + " instances per suite; max rel err L1 " +
              fmt("%.2e", worst_l1) + ", L2 " + fmt("%.2e", worst_l2) + ", model grad " +
              fmt("%.2e", worst_g) + ", Hessian diag " + fmt("%.2e", worst_h) + ", " +
              fmt("%.1f s", t)};
}

Outcome closed_form_optimum() {
  const auto start = Clock::now();
  NpvConfig cfg;
  cfg.seed = 1;
  const auto r = fit(*standard_normal_target(1), cfg);
  const double t = seconds_since(start);
  record("standard normal N=1", r);
  const double mu = r.mixture.mean(0)(0);
  const double var = r.mixture.sigma(0) * r.mixture.sigma(0);
  const double l2 = r.l2_trace.back();
  const double target = 0.5 * std::log(2.0) - 0.5;
  const bool ok = std::abs(mu) <= 1e-3 && std::abs(var - 1.0) <= 1e-3 &&
                  std::abs(l2 - target) <= 1e-4 && t < 5.0;
  return {ok, "mu " + fmt("%.2e", mu) + ", sigma^2 " + fmt("%.8f", var) + ", L2 " +
                  fmt("%.8f", l2) + ", " + fmt("%.2f s", t)};
}

Outcome delta_exactness() {
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 1 + trial % 6;
    const auto quad = npvi::testing::random_quadratic(rng, d);
    const auto model = quad.model();
    const auto q = npvi::testing::random_mixture(rng, 1 + trial % 7, d);
    double expectation = 0.0;
    for (Index n = 0; n < q.size(); ++n)
      expectation += quad.gaussian_expectation(q.mean(n), q.sigma(n));
    expectation /= static_cast<double>(q.size());
    worst = std::max(worst, std::abs(elbo_l2(q, *model) - (entropy_lower_bound(q) + expectation)));
  }
  return {worst < 1e-10, "50 quadratics, max |difference| " + fmt("%.2e", worst)};
}

Outcome map_equivalences() {
  NpvConfig cfg;
  cfg.initial_sigma = 1e-3;
  cfg.freeze_bandwidths = true;
  cfg.seed = 3;

  LogisticModelSpec ls;
  ls.data = synth_logistic(11, 200, 5, {}, 1.0);
  const auto logistic = logistic_log_joint(ls);
  const auto tmix = t_mixture_target(canonical_t_mixture_spec());

  double worst_map = 0.0;
  for (const auto& [label, model] :
       std::vector<std::pair<std::string, ModelPtr>>{{"logistic", logistic}, {"t_mixture", tmix}}) {
    const auto r = fit(*model, cfg);
    record(label + " frozen sigma", r);
    // Same start as the NPV mean so both climb to the same local mode.
    const auto map = map_estimate_from(*model, initial_mixture(model->dimension(), cfg).mean(0));
    worst_map = std::max(worst_map, max_abs(r.mixture.mean(0) - map.theta));
  }

  std::mt19937_64 rng(99);
  double worst_laplace = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 1 + trial % 5;
    const Vector mean = npvi::testing::random_vector(rng, d);
    Vector var(d);
    std::uniform_real_distribution<double> u(0.1, 4.0);
    for (Index i = 0; i < d; ++i) var(i) = u(rng);
    const auto target = gaussian_target(mean, var);
    const auto lap = laplace_diagonal(*target, mean);
    worst_laplace = std::max(worst_laplace, max_abs(lap.variances - var));
    const auto quad = npvi::testing::random_quadratic(rng, d);
    const Vector opt = quad.p.ldlt().solve(quad.b);
    const auto lq = laplace_diagonal(*quad.model(), opt);
    const Vector expected = (-1.0 / (-quad.p.diagonal().array())).matrix();
    worst_laplace = std::max(worst_laplace, max_abs(lq.variances - expected));
  }
  return {worst_map <= 1e-3 && worst_laplace <= 1e-10,
          "max |mean - MAP| " + fmt("%.2e", worst_map) + ", max Laplace variance error " +
              fmt("%.2e", worst_laplace)};
}

Outcome t_mixture_modes() {
  const auto start = Clock::now();
  const auto target = t_mixture_target(canonical_t_mixture_spec());
  const auto modes = oracles::grid_modes(
      *target, oracles::GridSpec{{{-8.0, 8.0, 161}, {-8.0, 8.0, 161}}}, 1e-4);
  if (modes.size() != 2)
    return {false, "grid oracle found " + std::to_string(modes.size()) + " modes, expected 2"};

  NpvConfig one;
  one.seed = 1;
  const auto r1 = fit(*target, one);
  record("t_mixture N=1", r1);
  const double d1 = std::min((r1.mixture.mean(0) - modes[0]).norm(),
                             (r1.mixture.mean(0) - modes[1]).norm());

  NpvConfig two;
  two.num_components = 2;
  two.seed = 1;
  const auto r2 = fit(*target, two);
  record("t_mixture N=2", r2);
  double d2 = 0.0;
  for (const auto& mode : modes) {
    double best = 1e300;
    for (Index n = 0; n < 2; ++n) best = std::min(best, (r2.mixture.mean(n) - mode).norm());
    d2 = std::max(d2, best);
  }
  const double t = seconds_since(start);
  return {d1 <= 0.5 && d2 <= 0.5 && t < 60.0,
          "N=1 distance to nearest mode " + fmt("%.3f", d1) +
              ", N=2 worst mode-to-component distance " + fmt("%.3f", d2) + ", " +
              fmt("%.1f s", t)};
}

Outcome logistic_end_to_end(const fs::path& root) {
  const auto start = Clock::now();
  const nlohmann::json model = {{"type", "logistic"}, {"rows", 200}, {"features", 5},
                                {"alpha_true", 1.0},  {"a", 1.0},    {"b", 0.01}};
  int wins = 0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto rows = compare_run(root, "logistic", seed, model, 5, nullptr);
    if (!rows.count("npv") || !rows.count("map")) return {false, "compare failed"};
    const bool win = rows["npv"].value >= rows["map"].value;
    wins += win;
    per_seed += " s" + std::to_string(seed) + " npv " + fmt("%.3f", rows["npv"].value) +
                " map " + fmt("%.3f", rows["map"].value) + (win ? " +;" : " -;");
  }
  const double t = seconds_since(start);
  return {wins >= 4 && t < 180.0,
          "NPV >= MAP on " + std::to_string(wins) + "/5 seeds;" + per_seed + " " +
              fmt("%.1f s", t)};
}

Outcome tlsa_end_to_end(const fs::path& root) {
  const auto start = Clock::now();
  const nlohmann::json model = {{"type", "tlsa"}, {"rows", 40},          {"grid", 10},
                                {"sources", 3},   {"covariates", 2},     {"tau", 1.0},
                                {"weight_variance", 5.0}, {"width_rate", 1.0}};
  int wins = 0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    nlohmann::json manifest;
    auto rows = compare_run(root, "tlsa", seed, model, 3, &manifest);
    if (!rows.count("npv") || !rows.count("map")) return {false, "compare failed"};
    const double var = manifest.at("heldout_variance").get<double>();
    const double npv = rows["npv"].value, map = rows["map"].value;
    const bool win = npv <= 1.05 * map && npv < var && map < var;
    wins += win;
    per_seed += " s" + std::to_string(seed) + " npv " + fmt("%.4f", npv) + " map " +
                fmt("%.4f", map) + " var " + fmt("%.4f", var) + (win ? " +;" : " -;");
  }
  const double t = seconds_since(start);
  return {wins >= 2 && t < 600.0,
          std::to_string(wins) + "/3 seeds pass;" + per_seed + " " + fmt("%.1f s", t)};
}

Outcome hmc_sanity() {
  const auto target = standard_normal_target(10);
  HmcConfig cfg;
  cfg.step_size = 0.7;
  cfg.leapfrog_steps = 3;
  cfg.num_samples = 5000;
  cfg.keep_last = 200;
  cfg.seed = 1;
  const auto r = hmc_sample(*target, cfg);
  Vector mean = Vector::Zero(10);
  for (const auto& s : r.samples) mean += s;
  mean /= static_cast<double>(r.samples.size());

  std::mt19937_64 rng(5);
  double worst_rev = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PhaseState s{npvi::testing::random_vector(rng, 10), npvi::testing::random_vector(rng, 10)};
    PhaseState fwd = leapfrog(*target, s, cfg.step_size, cfg.leapfrog_steps);
    fwd.momentum = -fwd.momentum;
    PhaseState back = leapfrog(*target, fwd, cfg.step_size, cfg.leapfrog_steps);
    worst_rev = std::max({worst_rev, max_abs(back.position - s.position),
                          max_abs(back.momentum + s.momentum)});
  }
  const double worst_mean = max_abs(mean);
  return {worst_mean <= 0.3 && r.acceptance_rate >= 0.6 && r.acceptance_rate <= 0.95 &&
              worst_rev <= 1e-8,
          "step 0.7 x 3 leapfrog; max |mean| " + fmt("%.3f", worst_mean) + ", acceptance " +
              fmt("%.3f", r.acceptance_rate) + ", reversibility error " + fmt("%.2e", worst_rev)};
}

Outcome endpoints_and_artifacts(const fs::path& root) {
  int regressions = 0;
  std::string regressed;
  for (const auto& e : g_endpoints) {
    if (!(e.final >= e.initial)) {
      ++regressions;
      regressed += " " + e.label;
    }
  }

  std::mt19937_64 rng(123);
  for (int i = 0; i < 20; ++i)
    g_mixtures.push_back(npvi::testing::random_mixture(rng, 1 + i % 6, 1 + i % 4, 1e3));
  int broken = 0;
  for (const auto& q : g_mixtures)
    if (!(mixture_from_json(mixture_to_json(q)) == q)) ++broken;

  // Deterministic artifacts: fit and compare twice with the same seed.
  const std::string fit_cfg = (fs::path(NPVI_SOURCE_DIR) / "configs" / "t_mixture.json").string();
  std::vector<std::string> diffs;
  for (const char* run : {"a", "b"}) {
    run_cli({"fit", "--config", fit_cfg, "--seed", "5", "--out", (root / "det_fit" / run).string()});
  }
  for (const char* f : {"approximation.json", "trace.csv"}) {
    if (read_file(root / "det_fit" / "a" / f) != read_file(root / "det_fit" / "b" / f))
      diffs.push_back(f);
  }
  const fs::path logistic = root / "logistic_1";
  for (const char* run : {"a", "b"}) {
    run_cli({"compare", "--config", (logistic / "compare.json").string(), "--out",
             (root / "det_compare" / run).string()});
  }
  if (read_file(root / "det_compare" / "a" / "metrics.csv") !=
      read_file(root / "det_compare" / "b" / "metrics.csv"))
    diffs.push_back("metrics.csv");

  std::string detail = std::to_string(g_endpoints.size()) + " runs, " +
                       std::to_string(regressions) + " with final L2 < initial L2" + regressed +
                       "; " + std::to_string(g_mixtures.size()) + " mixtures, " +
                       std::to_string(broken) + " JSON round-trip mismatches; ";
  detail += diffs.empty() ? std::string("repeated runs byte-identical")
                          : "differing outputs:" + [&] {
                              std::string s;
                              for (const auto& d : diffs) s += " " + d;
                              return s;
                            }();
  return {regressions == 0 && broken == 0 && diffs.empty(), detail};
}

}  // namespace

int main() {
  const fs::path root = scratch_root();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"entropy bound below Monte Carlo entropy", entropy_bound_property},
      {"gradient and Hessian suites match finite differences", gradient_suites},
      {"closed-form optimum on the standard normal", closed_form_optimum},
      {"exact on quadratic targets", delta_exactness},
      {"small-bandwidth and Laplace equivalences", map_equivalences},
      {"skew-t mixture modes", t_mixture_modes},
      {"logistic regression end to end", [&] { return logistic_end_to_end(root); }},
      {"TLSA end to end", [&] { return tlsa_end_to_end(root); }},
      {"HMC sanity", hmc_sanity},
      {"endpoint improvement, round trip, determinism",
       [&] { return endpoints_and_artifacts(root); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
