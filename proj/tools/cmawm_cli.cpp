// Command-line experiment runner.
//
//   cmawm run --algo elitist-wm --problem one-max --dim 50 --trials 20 --out runs.csv
//   cmawm run --config matrix.json --jobs 4
//   cmawm summarize --in runs.csv --out summary.csv

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmawm/harness.hpp"
#include "cmawm/rng.hpp"

namespace {

struct RunArgs {
  std::string config_path;
  cmawm::RunConfig cfg;
  int n_co = 0;
};

void write_meta(const std::string& path, const std::vector<cmawm::RunConfig>& matrix) {
  nlohmann::json meta;
  meta["rng_generator"] = cmawm::RandomStream::kGenerator;
  meta["rng_normal_transform"] = cmawm::RandomStream::kNormalTransform;
  meta["seed_rule"] = "seed = base_seed + trial_index";
  for (const auto& c : matrix) {
    meta["runs"].push_back({{"algo", c.algorithm},
                            {"problem", c.problem},
                            {"dim", c.dim},
                            {"n_co", c.n_co ? nlohmann::json(*c.n_co) : nlohmann::json()},
                            {"trials", c.trials},
                            {"seed", c.seed},
                            {"budget", c.budget()},
                            {"target", c.target},
                            {"eig_floor", c.eig_floor},
                            {"postprocess", c.postprocess},
                            {"ablate_mean_v", c.ablate_mean_v}});
  }
  std::ofstream(path) << meta.dump(2) << '\n';
}

int do_run(const RunArgs& args, const CLI::App& cmd) {
  std::vector<cmawm::RunConfig> matrix;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config " + args.config_path);
    matrix = cmawm::load_config_matrix(in);
  } else {
    matrix.push_back(args.cfg);
  }

  const auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
  for (auto& c : matrix) {
    if (given("--algo")) c.algorithm = args.cfg.algorithm;
    if (given("--problem")) c.problem = args.cfg.problem;
    if (given("--dim")) c.dim = args.cfg.dim;
    if (given("--n-co")) c.n_co = args.n_co;
    if (given("--trials")) c.trials = args.cfg.trials;
    if (given("--seed")) c.seed = args.cfg.seed;
    if (given("--budget-mult")) c.budget_multiplier = args.cfg.budget_multiplier;
    if (given("--target")) c.target = args.cfg.target;
    if (given("--eig-floor")) c.eig_floor = args.cfg.eig_floor;
    if (given("--no-postprocess")) c.postprocess = false;
    if (given("--ablate-mean-v")) c.ablate_mean_v = true;
    if (given("--trace")) c.trace = true;
    if (given("--incremental-cholesky")) c.incremental_cholesky = true;
    if (given("--jobs")) c.jobs = args.cfg.jobs;
    if (given("--out")) c.out = args.cfg.out;
    c.validate();
  }

  std::vector<cmawm::TrialRecord> records;
  for (const auto& c : matrix) {
    auto batch = cmawm::run_trials(c);
    records.insert(records.end(), std::make_move_iterator(batch.begin()),
                   std::make_move_iterator(batch.end()));
  }

  const std::string out = matrix.front().out;
  if (out.empty() || out == "-") {
    cmawm::write_records_csv(std::cout, records);
  } else {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    cmawm::write_records_csv(os, records);
    write_meta(out + ".meta.json", matrix);
    if (matrix.front().trace) {
      std::ofstream ts(out + ".trace.csv");
      cmawm::write_trace_csv(ts, records);
    }
    const auto summary = cmawm::aggregate(records);
    cmawm::write_summary_csv(std::cout, summary);
  }
  return EXIT_SUCCESS;
}

int do_summarize(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open " + in_path);
  const auto records = cmawm::read_records_csv(in);
  const auto rows = cmawm::aggregate(records);
  if (out_path.empty() || out_path == "-") {
    cmawm::write_summary_csv(std::cout, rows);
  } else {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot write " + out_path);
    cmawm::write_summary_csv(os, rows);
  }
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-integer CMA-ES with margin: experiment runner"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto& cfg = run_args.cfg;
  auto* run = app.add_subcommand("run", "Run seeded trials and write one CSV row per trial");
  run->add_option("--config", run_args.config_path, "JSON run matrix; CLI flags override it");
  run->add_option("--algo", cfg.algorithm, "cma-wm | elitist-wm | cga | pbil | ea")
      ->check(CLI::IsMember(cmawm::algorithm_names()));
  run->add_option("--problem", cfg.problem, "Benchmark name")
      ->check(CLI::IsMember(cmawm::problem_names()));
  run->add_option("--dim", cfg.dim, "Total dimension N")->check(CLI::PositiveNumber);
  run->add_option("--n-co", run_args.n_co, "Number of continuous dimensions")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--trials", cfg.trials, "Number of trials")->check(CLI::PositiveNumber);
  run->add_option("--seed", cfg.seed, "Base seed; trial i uses seed + i");
  run->add_option("--budget-mult", cfg.budget_multiplier, "Budget = N * multiplier")
      ->check(CLI::PositiveNumber);
  run->add_option("--target", cfg.target, "Success threshold for minimization problems");
  run->add_option("--eig-floor", cfg.eig_floor, "Stop when min eig(sigma^2 C) drops below");
  run->add_flag("--no-postprocess", "Disable the discrete-domain post-processes");
  run->add_flag("--ablate-mean-v", "elitist-wm: accept the raw sample as the mean");
  run->add_flag("--trace", "Write <out>.trace.csv with per-iteration diagnostics");
  run->add_flag("--incremental-cholesky", "elitist-wm: O(N^2) factor updates");
  run->add_option("--jobs", cfg.jobs, "Concurrent trials")->check(CLI::PositiveNumber);
  run->add_option("--out", cfg.out, "Records CSV path ('-' for stdout)");

  std::string in_path, summary_out;
  auto* summarize = app.add_subcommand("summarize", "Aggregate a records CSV per cell");
  summarize->add_option("--in", in_path, "Records CSV")->required();
  summarize->add_option("--out", summary_out, "Summary CSV path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(run_args, *run);
    return do_summarize(in_path, summary_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
}
