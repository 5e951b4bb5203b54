#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmawm/benchmarks.hpp"
#include "cmawm/optimizer.hpp"
#include "cmawm/rng.hpp"

namespace cmawm {

const std::vector<std::string>& algorithm_names();

struct RunConfig {
  std::string algorithm = "elitist-wm";
  std::string problem = "one-max";
  int dim = 10;
  std::optional<int> n_co;
  int trials = 1;
  double budget_multiplier = 1e5;
  double target = 1e-10;
  double eig_floor = 1e-30;
  std::uint64_t seed = 0;
  bool ablate_mean_v = false;
  bool postprocess = true;
  bool trace = false;
  bool incremental_cholesky = false;
  int jobs = 1;
  std::string out;

  /// dim * budget_multiplier, rounded down.
  long budget() const;

  /// Throws std::invalid_argument on any inconsistency, including an
  /// algorithm that cannot handle the problem's domain.
  void validate() const;
};

enum class Termination { kTarget, kBudget, kEigenvalueFloor, kNumericalError };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

/// Per-iteration state of a Gaussian model (empty for the baselines).
struct TraceRow {
  long iteration = 0;
  long evaluations = 0;
  double best_f = 0.0;
  double sigma = 0.0;
  Vector abs_mean;
  Vector marginal_std;
};

struct TrialRecord {
  std::string algorithm;
  std::string problem;
  int dim = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  long evaluations = 0;
  double best_f = 0.0;
  Termination reason = Termination::kBudget;
  std::vector<TraceRow> trace;

  bool operator==(const TrialRecord&) const;
};

/// Initial mean: 1/2 on binary dimensions, uniform in [1, 3] elsewhere.
Vector initial_mean(const SearchSpace& space, RandomStream& rng);

/// The optimizer `config.algorithm` with the post-process settings implied by
/// the problem's domain and the config flags.
std::unique_ptr<Optimizer> make_optimizer(const RunConfig& config, const Problem& problem,
                                          const Vector& mean0, RandomStream rng);

/// One seeded trial; its seed is config.seed + trial_index.
TrialRecord run_trial(const RunConfig& config, int trial_index);

/// All trials of a config, run on up to config.jobs threads. Records come
/// back in trial order.
std::vector<TrialRecord> run_trials(const RunConfig& config);

/// Type-7 (linear interpolation) percentile of sorted data, q in [0, 1].
double percentile(std::span<const double> sorted, double q);

struct SummaryRow {
  std::string algorithm;
  std::string problem;
  int dim = 0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  // Evaluations over successful trials; empty when nothing succeeded.
  std::optional<double> median;
  std::optional<double> q25;
  std::optional<double> q75;
  // The above divided by the success rate.
  std::optional<double> adjusted_median;
  std::optional<double> adjusted_q25;
  std::optional<double> adjusted_q75;
};

/// One row per (algorithm, problem, dim), sorted by that key.
std::vector<SummaryRow> aggregate(std::span<const TrialRecord> records);

void write_records_csv(std::ostream& os, std::span<const TrialRecord> records);
std::vector<TrialRecord> read_records_csv(std::istream& is);
void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows);
/// Long format: one line per (trial, iteration, coordinate).
void write_trace_csv(std::ostream& os, std::span<const TrialRecord> records);

/// Reads a JSON run matrix. "algo", "problem" and "dim" may be scalars or
/// arrays; every combination becomes one RunConfig.
std::vector<RunConfig> load_config_matrix(std::istream& is);

}  // namespace cmawm
