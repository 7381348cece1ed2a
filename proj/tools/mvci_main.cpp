// mvci: fit, calibrate, evaluate, benchmark, and generate data for
// (k,l)-confidence areas. Every run writes <out>.manifest.json with the
// resolved parameters; rerunning from a manifest reproduces the artifacts.
//
// Exit codes: 0 ok, 2 invalid input, 3 search budget exceeded. Errors are
// one JSON object per line on stderr.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvci/algorithms.hpp"
#include "mvci/calibrate.hpp"
#include "mvci/confidence_area.hpp"
#include "mvci/datagen.hpp"
#include "mvci/dataset.hpp"
#include "mvci/errors.hpp"
#include "mvci/json_io.hpp"
#include "mvci/lp.hpp"
#include "mvci/rng.hpp"
#include "mvci/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Flag wins over the MVCI_SEED environment variable; the fallback is fixed
// so that unseeded runs are still reproducible.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MVCI_SEED")) {
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0')
      throw mvci::InvalidInputError(std::string("MVCI_SEED is not an unsigned integer: ") + env);
    return v;
  }
  return 1;
}

void write_text_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mvci::InvalidInputError("cannot open for writing: " + path.string());
  out << body;
  if (!out) throw mvci::InvalidInputError("write failed: " + path.string());
}

std::string mask_csv(const mvci::InclusionMask& mask) {
  std::string body;
  for (std::size_t i = 0; i < mask.rows(); ++i) {
    for (std::size_t j = 0; j < mask.cols(); ++j) {
      if (j) body += ',';
      body += mask.included(i, j) ? '1' : '0';
    }
    body += '\n';
  }
  return body;
}

mvci::lp::LowerBoundRule lower_rule_from_string(const std::string& name) {
  if (name == "min") return mvci::lp::LowerBoundRule::ColumnMin;
  if (name == "zero") return mvci::lp::LowerBoundRule::Zero;
  throw mvci::InvalidInputError("unknown lower bound rule: " + name);
}

mvci::datagen::Family family_from_string(const std::string& name) {
  if (name == "uniform" || name == "unif") return mvci::datagen::Family::Uniform01;
  if (name == "normal") return mvci::datagen::Family::StandardNormal;
  if (name == "cauchy") return mvci::datagen::Family::Cauchy;
  throw mvci::InvalidInputError("unknown family: " + name);
}

void emit_manifest(const std::string& prefix, const std::string& command,
                   json parameters, std::uint64_t seed,
                   std::vector<std::string> inputs,
                   std::vector<std::string> outputs, double wall_clock_ms) {
  mvci::write_json_file(prefix + ".manifest.json",
                        mvci::manifest_json(command, std::move(parameters), seed,
                                            std::move(inputs), std::move(outputs),
                                            wall_clock_ms));
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string input, algorithm = "mi", lower = "min", dump_lp, out;
  int k = 0, l = 0;
  double budget = 1e7;
  std::optional<std::uint64_t> seed;
};

int cmd_fit(const FitArgs& a) {
  const mvci::Dataset data = mvci::Dataset::from_csv_file(a.input);
  const mvci::Algorithm algo = mvci::algorithm_from_string(a.algorithm);
  mvci::FitOptions options;
  options.lp_lower = lower_rule_from_string(a.lower);
  options.oracle_budget = a.budget;
  if (!a.dump_lp.empty() && algo != mvci::Algorithm::Lp1)
    throw mvci::InvalidInputError("--dump-lp needs --algorithm lp1");

  const auto t0 = Clock::now();
  const mvci::FitOutput fit = mvci::run_fit(algo, data, {a.k, a.l}, options);
  const double fit_ms = elapsed_ms(t0);  // the fit call only, excludes I/O

  const std::string area_path = a.out + ".area.json";
  const std::string mask_path = a.out + ".mask.csv";
  mvci::write_json_file(area_path, mvci::area_to_json(fit.area, a.k, a.l, algo));
  write_text_file(mask_path, mask_csv(fit.mask));
  std::vector<std::string> outputs{area_path, mask_path};

  if (!a.dump_lp.empty()) {  // relaxation text for external-solver checks
    const auto inst = mvci::lp::OneSidedInstance::build(
        data, mvci::lp::lower_bounds(data, options.lp_lower));
    std::ofstream lp_out(a.dump_lp, std::ios::binary);
    if (!lp_out) throw mvci::InvalidInputError("cannot open for writing: " + a.dump_lp);
    mvci::lp::write_lp(mvci::lp::build_model(inst, a.l), lp_out);
    outputs.push_back(a.dump_lp);
  }

  emit_manifest(a.out, "fit",
                json{{"algorithm", a.algorithm},
                     {"k", a.k},
                     {"l", a.l},
                     {"lower", a.lower},
                     {"budget", a.budget}},
                resolve_seed(a.seed), {a.input}, std::move(outputs), fit_ms);
  return 0;
}

// ---------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string train, test, algorithm = "mi", out;
  int l = 0;
  double alpha = 0.1;
  std::optional<std::uint64_t> seed;
};

int cmd_calibrate(const CalibrateArgs& a) {
  const mvci::Dataset train = mvci::Dataset::from_csv_file(a.train);
  const mvci::Dataset test = mvci::Dataset::from_csv_file(a.test);
  const mvci::Algorithm algo = mvci::algorithm_from_string(a.algorithm);

  const auto t0 = Clock::now();
  const mvci::calibrate::Result res =
      mvci::calibrate::choose_k(train, test, algo, a.l, a.alpha);
  const double ms = elapsed_ms(t0);

  const std::string cal_path = a.out + ".calibration.json";
  const std::string trace_path = a.out + ".trace.dat";
  mvci::write_json_file(cal_path, mvci::calibration_to_json(res));

  // Plot-ready trace: evaluated k/n against the observed miss rate.
  std::string trace = "# k_over_n alpha_observed\n";
  for (std::size_t i = 0; i < res.trace_k.size(); ++i) {
    trace += fmt(static_cast<double>(res.trace_k[i]) / static_cast<double>(train.rows()));
    trace += ' ';
    trace += fmt(res.trace_alpha[i]);
    trace += '\n';
  }
  write_text_file(trace_path, trace);

  emit_manifest(a.out, "calibrate",
                json{{"algorithm", a.algorithm}, {"l", a.l}, {"alpha", a.alpha}},
                resolve_seed(a.seed), {a.train, a.test}, {cal_path, trace_path}, ms);
  return 0;
}

// --------------------------------------------------------------- eval

struct EvalArgs {
  std::string area, input, out;
  std::vector<int> ls;  // empty: every allowance 0..m
  std::optional<std::uint64_t> seed;
};

int cmd_eval(const EvalArgs& a) {
  const mvci::AreaRecord rec = mvci::area_from_json(mvci::read_json_file(a.area));
  const mvci::Dataset test = mvci::Dataset::from_csv_file(a.input);

  std::vector<int> ls = a.ls;
  if (ls.empty())
    for (int l = 0; l <= static_cast<int>(test.cols()); ++l) ls.push_back(l);

  const auto t0 = Clock::now();
  const std::vector<double> alphas =
      mvci::calibrate::alpha_for_allowances(rec.area, test, ls);
  const double ms = elapsed_ms(t0);

  std::string table = "# l_test alpha\n";
  for (std::size_t i = 0; i < ls.size(); ++i)
    table += std::to_string(ls[i]) + ' ' + fmt(alphas[i]) + '\n';
  const std::string out_path = a.out + ".alpha.dat";
  write_text_file(out_path, table);

  emit_manifest(a.out, "eval", json{{"l_test", ls}}, resolve_seed(a.seed),
                {a.area, a.input}, {out_path}, ms);
  return 0;
}

// -------------------------------------------------------------- bench

struct BenchArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
};

struct BenchRow {
  std::string family;
  std::size_t n_train = 0, n_test = 0, m = 0;
  int l = 0, trials = 0;
  double alpha = 0.0;
};

// One table row: both solvers calibrated on fresh train/test splits, means
// over the trials. Timing covers the final fit at the calibrated k only.
struct BenchOutcome {
  double mi_a_over_m = 0, mi_k_over_n = 0, mi_t_ms = 0;
  double gr_a_over_m = 0, gr_k_over_n = 0, gr_t_ms = 0;
  std::string status = "ok";
};

BenchOutcome run_bench_row(const BenchRow& row, std::uint64_t seed, std::size_t row_index) {
  BenchOutcome out;
  const auto solvers = {mvci::Algorithm::Mi, mvci::Algorithm::Gr};
  for (int t = 0; t < row.trials; ++t) {
    const std::uint64_t base = row_index * 2 * static_cast<std::uint64_t>(row.trials);
    mvci::datagen::DistributionSpec spec;
    spec.family = family_from_string(row.family);
    spec.cols = row.m;
    spec.rows = row.n_train;
    spec.seed = mvci::derive_seed(seed, base + 2 * static_cast<std::uint64_t>(t));
    const mvci::Dataset train = mvci::datagen::generate(spec);
    spec.rows = row.n_test;
    spec.seed = mvci::derive_seed(seed, base + 2 * static_cast<std::uint64_t>(t) + 1);
    const mvci::Dataset test = mvci::datagen::generate(spec);

    for (mvci::Algorithm solver : solvers) {
      const mvci::calibrate::Result cal =
          mvci::calibrate::choose_k(train, test, solver, row.l, row.alpha);
      const auto t0 = Clock::now();
      const mvci::FitOutput fit = mvci::run_fit(solver, train, {cal.chosen_k, row.l});
      const double ms = elapsed_ms(t0);
      const double a_over_m = fit.area.size() / static_cast<double>(row.m);
      if (solver == mvci::Algorithm::Mi) {
        out.mi_a_over_m += a_over_m;
        out.mi_k_over_n += cal.chosen_k_over_n;
        out.mi_t_ms += ms;
      } else {
        out.gr_a_over_m += a_over_m;
        out.gr_k_over_n += cal.chosen_k_over_n;
        out.gr_t_ms += ms;
      }
    }
  }
  const double d = static_cast<double>(row.trials);
  out.mi_a_over_m /= d; out.mi_k_over_n /= d; out.mi_t_ms /= d;
  out.gr_a_over_m /= d; out.gr_k_over_n /= d; out.gr_t_ms /= d;
  return out;
}

int cmd_bench(const BenchArgs& a) {
  const json cfg = mvci::read_json_file(a.config);
  if (!cfg.is_object() || !cfg.contains("rows") || !cfg["rows"].is_array() ||
      cfg["rows"].empty())
    throw mvci::InvalidInputError("bench config needs a non-empty \"rows\" array");

  std::optional<std::uint64_t> seed_flag = a.seed;
  if (!seed_flag && cfg.contains("seed"))
    seed_flag = cfg["seed"].get<std::uint64_t>();
  const std::uint64_t seed = resolve_seed(seed_flag);

  std::vector<BenchRow> rows;
  for (const json& r : cfg["rows"]) {
    BenchRow row;
    row.family = r.at("family").get<std::string>();
    family_from_string(row.family);  // validate up front
    row.m = r.at("m").get<std::size_t>();
    row.l = r.at("l").get<int>();
    row.n_train = r.value("n_train", cfg.value("n_train", std::size_t{500}));
    row.n_test = r.value("n_test", cfg.value("n_test", std::size_t{1000}));
    row.trials = r.value("trials", cfg.value("trials", 25));
    row.alpha = r.value("alpha", cfg.value("alpha", 0.1));
    if (row.m == 0 || row.n_train == 0 || row.n_test == 0 || row.trials <= 0)
      throw mvci::InvalidInputError("bench row has an empty dimension or no trials");
    rows.push_back(row);
  }

  // Results are deterministic given the seed; wall clock goes to a separate
  // file so a rerun of the results table is byte-identical.
  std::string results = "family,n_train,n_test,m,l,trials,"
                        "mi_a_over_m,mi_k_over_n,gr_a_over_m,gr_k_over_n,status\n";
  std::string timings = "family,n_train,n_test,m,l,trials,mi_t_ms,gr_t_ms\n";
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const BenchRow& row = rows[i];
    BenchOutcome outcome;
    try {
      outcome = run_bench_row(row, seed, i);
    } catch (const std::exception& e) {  // partial failure: record, continue
      outcome = BenchOutcome{};
      outcome.status = std::string("error: ") + e.what();
      for (char& c : outcome.status)
        if (c == ',' || c == '\n') c = ';';
    }
    const std::string head = row.family + ',' + std::to_string(row.n_train) + ',' +
                             std::to_string(row.n_test) + ',' + std::to_string(row.m) +
                             ',' + std::to_string(row.l) + ',' + std::to_string(row.trials);
    results += head + ',' + fmt(outcome.mi_a_over_m) + ',' + fmt(outcome.mi_k_over_n) +
               ',' + fmt(outcome.gr_a_over_m) + ',' + fmt(outcome.gr_k_over_n) + ',' +
               outcome.status + '\n';
    timings += head + ',' + fmt(outcome.mi_t_ms) + ',' + fmt(outcome.gr_t_ms) + '\n';
  }
  const double ms = elapsed_ms(t0);

  const std::string results_path = a.out + ".results.csv";
  const std::string timings_path = a.out + ".timings.csv";
  write_text_file(results_path, results);
  write_text_file(timings_path, timings);
  emit_manifest(a.out, "bench", json{{"config", cfg}}, seed, {a.config},
                {results_path, timings_path}, ms);
  return 0;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind = "iid", family = "uniform", source, config, out;
  std::size_t rows = 0, cols = 0, curves = 0, grid_points = 0, baseline = 0;
  double cauchy_scale = 2.0, step_sd = 1.0, bandwidth = 0.0;
  std::optional<std::uint64_t> seed;
  const CLI::App* cli = nullptr;  // which flags were given explicitly
};

// Config file supplies defaults, explicit flags win.
template <typename T>
void merge(const CLI::App* cli, const char* flag, const json& cfg, const char* key, T& slot) {
  if (cli->count(flag)) return;
  if (cfg.contains(key)) slot = cfg.at(key).get<T>();
}

int cmd_gen(GenArgs& a) {
  json cfg = json::object();
  if (!a.config.empty()) cfg = mvci::read_json_file(a.config);
  merge(a.cli, "--kind", cfg, "kind", a.kind);
  merge(a.cli, "--family", cfg, "family", a.family);
  merge(a.cli, "--rows", cfg, "rows", a.rows);
  merge(a.cli, "--cols", cfg, "cols", a.cols);
  merge(a.cli, "--cauchy-scale", cfg, "cauchy_scale", a.cauchy_scale);
  merge(a.cli, "--step-sd", cfg, "step_sd", a.step_sd);
  merge(a.cli, "--source", cfg, "source", a.source);
  merge(a.cli, "--curves", cfg, "curves", a.curves);
  merge(a.cli, "--grid-points", cfg, "grid_points", a.grid_points);
  merge(a.cli, "--bandwidth", cfg, "bandwidth", a.bandwidth);
  merge(a.cli, "--normalize-baseline", cfg, "normalize_baseline", a.baseline);
  if (!a.seed && cfg.contains("seed")) a.seed = cfg["seed"].get<std::uint64_t>();
  const std::uint64_t seed = resolve_seed(a.seed);

  const auto t0 = Clock::now();
  std::optional<mvci::Dataset> data;
  json params{{"kind", a.kind}, {"seed", seed}};
  std::vector<std::string> inputs;
  if (!a.config.empty()) inputs.push_back(a.config);

  if (a.kind == "iid") {
    mvci::datagen::DistributionSpec spec;
    spec.family = family_from_string(a.family);
    spec.rows = a.rows;
    spec.cols = a.cols;
    spec.seed = seed;
    spec.cauchy_scale = a.cauchy_scale;
    data = mvci::datagen::generate(spec);
    params["family"] = a.family;
    params["rows"] = a.rows;
    params["cols"] = a.cols;
    if (spec.family == mvci::datagen::Family::Cauchy)
      params["cauchy_scale"] = a.cauchy_scale;
  } else if (a.kind == "walk") {
    data = mvci::datagen::random_walk(a.rows, a.cols, a.step_sd, seed);
    params["rows"] = a.rows;
    params["cols"] = a.cols;
    params["step_sd"] = a.step_sd;
  } else if (a.kind == "bootstrap") {
    if (a.source.empty())
      throw mvci::InvalidInputError("bootstrap generation needs --source with x,y columns");
    const mvci::Dataset xy = mvci::Dataset::from_csv_file(a.source);
    if (xy.cols() != 2)
      throw mvci::InvalidInputError("bootstrap source must have exactly two columns");
    mvci::datagen::KernelRegressionSpec spec;
    spec.curves = a.curves;
    spec.grid_points = a.grid_points;
    spec.bandwidth = a.bandwidth;
    spec.seed = seed;
    data = mvci::datagen::bootstrap_curves(spec, xy.column(0), xy.column(1));
    inputs.push_back(a.source);
    params["source"] = a.source;
    params["curves"] = a.curves;
    params["grid_points"] = a.grid_points;
    params["bandwidth"] = a.bandwidth;
  } else {
    throw mvci::InvalidInputError("unknown generator kind: " + a.kind);
  }

  if (a.baseline > 0) {
    data = mvci::datagen::normalize_relative(*data, a.baseline);
    params["normalize_baseline"] = a.baseline;
  }
  const double ms = elapsed_ms(t0);

  const std::string csv_path = a.out + ".csv";
  data->to_csv_file(csv_path);
  emit_manifest(a.out, "gen", params, seed, inputs, {csv_path}, ms);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-size (k,l)-confidence areas for multivariate data"};
  app.set_version_flag("--version", mvci::kVersion);
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a confidence area to a CSV matrix");
  fit_cmd->add_option("input", fit.input, "training matrix CSV")->required();
  fit_cmd->add_option("-a,--algorithm", fit.algorithm, "mi|gr|lp1|naive|oracle")->required();
  fit_cmd->add_option("-k,--discard", fit.k, "observations the area may miss");
  fit_cmd->add_option("-l,--allowance", fit.l, "uncovered positions allowed per kept observation");
  fit_cmd->add_option("--lower", fit.lower, "one-sided lower bound rule: min|zero");
  fit_cmd->add_option("--dump-lp", fit.dump_lp, "also write the lp1 relaxation as LP text");
  fit_cmd->add_option("--budget", fit.budget, "exhaustive search node budget");
  fit_cmd->add_option("--seed", fit.seed, "recorded in the manifest");
  fit_cmd->add_option("-o,--out", fit.out, "output path prefix")->required();

  CalibrateArgs cal;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "choose k from a train/test split");
  cal_cmd->add_option("--train", cal.train, "training matrix CSV")->required();
  cal_cmd->add_option("--test", cal.test, "held-out matrix CSV")->required();
  cal_cmd->add_option("-a,--algorithm", cal.algorithm, "mi|gr");
  cal_cmd->add_option("-l,--allowance", cal.l, "uncovered positions allowed per kept observation");
  cal_cmd->add_option("--alpha", cal.alpha, "target miss rate")->required();
  cal_cmd->add_option("--seed", cal.seed, "recorded in the manifest");
  cal_cmd->add_option("-o,--out", cal.out, "output path prefix")->required();

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "miss rate of a fitted area on new data");
  eval_cmd->add_option("area", ev.area, "area JSON written by fit")->required();
  eval_cmd->add_option("input", ev.input, "evaluation matrix CSV")->required();
  eval_cmd->add_option("-l,--allowance", ev.ls, "allowances to sweep (default 0..m)");
  eval_cmd->add_option("--seed", ev.seed, "recorded in the manifest");
  eval_cmd->add_option("-o,--out", ev.out, "output path prefix")->required();

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "solver comparison table from a config");
  bench_cmd->add_option("config", bench.config, "bench config JSON")->required();
  bench_cmd->add_option("--seed", bench.seed, "overrides the config seed");
  bench_cmd->add_option("-o,--out", bench.out, "output path prefix")->required();

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a synthetic dataset CSV");
  gen_cmd->add_option("--kind", gen.kind, "iid|walk|bootstrap");
  gen_cmd->add_option("--family", gen.family, "uniform|normal|cauchy (iid)");
  gen_cmd->add_option("--rows", gen.rows, "observations");
  gen_cmd->add_option("--cols", gen.cols, "variables");
  gen_cmd->add_option("--cauchy-scale", gen.cauchy_scale, "cauchy scale, location 0");
  gen_cmd->add_option("--step-sd", gen.step_sd, "walk increment standard deviation");
  gen_cmd->add_option("--source", gen.source, "x,y scatter CSV (bootstrap)");
  gen_cmd->add_option("--curves", gen.curves, "bootstrap resamples");
  gen_cmd->add_option("--grid-points", gen.grid_points, "smoothed curve length");
  gen_cmd->add_option("--bandwidth", gen.bandwidth, "kernel bandwidth, <=0 for the default rule");
  gen_cmd->add_option("--normalize-baseline", gen.baseline,
                      "subtract each row's mean over its first N entries");
  gen_cmd->add_option("--config", gen.config, "JSON with the same keys; flags win");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("-o,--out", gen.out, "output path prefix")->required();
  gen.cli = gen_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    std::cerr << json{{"error", e.what()}, {"exit_code", 2}}.dump() << "\n";
    return 2;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (cal_cmd->parsed()) return cmd_calibrate(cal);
    if (eval_cmd->parsed()) return cmd_eval(ev);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (gen_cmd->parsed()) return cmd_gen(gen);
  } catch (const mvci::BudgetExceededError& e) {
    std::cerr << json{{"error", e.what()}, {"exit_code", 3}}.dump() << "\n";
    return 3;
  } catch (const mvci::InvalidInputError& e) {
    std::cerr << json{{"error", e.what()}, {"exit_code", 2}}.dump() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << json{{"error", e.what()}, {"exit_code", 2}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"exit_code", 1}}.dump() << "\n";
    return 1;
  }
  return 0;
}
