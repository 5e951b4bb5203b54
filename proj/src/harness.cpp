#include "cmawm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "cmawm/baselines.hpp"
#include "cmawm/cma_wm.hpp"
#include "cmawm/elitist_wm.hpp"

namespace cmawm {

namespace {

bool is_baseline(std::string_view algo) { return algo == "cga" || algo == "pbil" || algo == "ea"; }

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    std::size_t used = 0;
    value = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(std::string("bad ") + what + ": " + s);
  } else {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument(std::string("bad ") + what + ": " + s);
    }
  }
  return value;
}

}  // namespace

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"cma-wm", "elitist-wm", "cga", "pbil", "ea"};
  return names;
}

long RunConfig::budget() const {
  return static_cast<long>(std::floor(static_cast<double>(dim) * budget_multiplier));
}

void RunConfig::validate() const {
  const auto& algos = algorithm_names();
  if (std::find(algos.begin(), algos.end(), algorithm) == algos.end()) {
    throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
  }
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(budget_multiplier > 0.0) || budget() < 1) {
    throw std::invalid_argument("budget multiplier must give a budget of at least 1");
  }
  if (!(eig_floor >= 0.0)) throw std::invalid_argument("eigenvalue floor must be >= 0");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  const Problem problem = make_problem(this->problem, dim, n_co);
  const SearchSpace& space = problem.space();
  if (is_baseline(algorithm) && !(space.fully_discrete() && space.all_discrete_binary())) {
    throw std::invalid_argument(algorithm + " only runs on fully binary problems, not '" +
                                this->problem + "'");
  }
  if (algorithm == "cma-wm" && dim < 2) throw std::invalid_argument("cma-wm needs N >= 2");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kTarget: return "target";
    case Termination::kBudget: return "budget";
    case Termination::kEigenvalueFloor: return "eigenvalue-floor";
    case Termination::kNumericalError: return "numerical-error";
  }
  return "unknown";
}

Termination termination_from_string(std::string_view s) {
  for (auto t : {Termination::kTarget, Termination::kBudget, Termination::kEigenvalueFloor,
                 Termination::kNumericalError}) {
    if (to_string(t) == s) return t;
  }
  throw std::invalid_argument("unknown termination reason '" + std::string(s) + "'");
}

bool TrialRecord::operator==(const TrialRecord& o) const {
  if (std::tie(algorithm, problem, dim, trial, seed, success, evaluations, best_f, reason) !=
      std::tie(o.algorithm, o.problem, o.dim, o.trial, o.seed, o.success, o.evaluations,
               o.best_f, o.reason)) {
    return false;
  }
  if (trace.size() != o.trace.size()) return false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceRow& a = trace[i];
    const TraceRow& b = o.trace[i];
    if (a.iteration != b.iteration || a.evaluations != b.evaluations || a.best_f != b.best_f ||
        a.sigma != b.sigma || a.abs_mean != b.abs_mean || a.marginal_std != b.marginal_std) {
      return false;
    }
  }
  return true;
}

Vector initial_mean(const SearchSpace& space, RandomStream& rng) {
  Vector m(space.dimension());
  for (int j = 0; j < space.dimension(); ++j) {
    const bool binary = space.is_discrete(j) && space.values(j).size() == 2 &&
                        space.values(j)[0] == 0.0 && space.values(j)[1] == 1.0;
    m(j) = binary ? 0.5 : rng.uniform(1.0, 3.0);
  }
  return m;
}

std::unique_ptr<Optimizer> make_optimizer(const RunConfig& config, const Problem& problem,
                                          const Vector& mean0, RandomStream rng) {
  const SearchSpace& space = problem.space();
  const int n = space.dimension();
  const bool discrete_domain = space.fully_discrete();
  const bool binary_domain = discrete_domain && space.all_discrete_binary();

  if (config.algorithm == "elitist-wm") {
    ElitistOptions opts;
    opts.discretize_mean = !config.ablate_mean_v;
    opts.postprocess = config.postprocess && discrete_domain;
    opts.incremental_cholesky = config.incremental_cholesky;
    return std::make_unique<ElitistCmaWithMargin>(space, mean0, 1.0, rng,
                                                  default_elitist_hyperparams(n), opts);
  }
  if (config.algorithm == "cma-wm") {
    PostProcess post = PostProcess::kNone;
    if (config.postprocess && discrete_domain) {
      post = binary_domain ? PostProcess::kBinaryRecentre : PostProcess::kFoldA;
    }
    return std::make_unique<CmaWithMargin>(space, mean0, 1.0, rng,
                                           default_population_hyperparams(n), post);
  }
  if (config.algorithm == "cga") return std::make_unique<CompactGa>(space, rng);
  if (config.algorithm == "pbil") return std::make_unique<Pbil>(space, rng);
  if (config.algorithm == "ea") return std::make_unique<OnePlusOneEa>(space, rng);
  throw std::invalid_argument("unknown algorithm '" + config.algorithm + "'");
}

TrialRecord run_trial(const RunConfig& config, int trial_index) {
  const Problem problem = make_problem(config.problem, config.dim, config.n_co);
  TrialRecord rec;
  rec.algorithm = config.algorithm;
  rec.problem = config.problem;
  rec.dim = config.dim;
  rec.trial = trial_index;
  rec.seed = config.seed + static_cast<std::uint64_t>(trial_index);

  RandomStream rng(rec.seed);
  const Vector mean0 = initial_mean(problem.space(), rng);
  auto opt = make_optimizer(config, problem, mean0, rng);

  const long budget = config.budget();
  std::optional<Fitness> best_loss;
  long iteration = 0;
  std::vector<Fitness> losses;
  while (true) {
    if (opt->covariance_below(config.eig_floor)) {
      rec.reason = Termination::kEigenvalueFloor;
      break;
    }
    const auto points = opt->ask();
    if (rec.evaluations + static_cast<long>(points.size()) > budget) {
      rec.reason = Termination::kBudget;
      break;
    }
    losses.clear();
    for (const auto& p : points) {
      const Fitness value = problem.evaluate(p);
      const Fitness loss = problem.sense() == Sense::kMinimize ? value : -value;
      losses.push_back(loss);
      if (!best_loss || loss < *best_loss) best_loss = loss;
      if (problem.reached(p, value, config.target)) rec.success = true;
    }
    rec.evaluations += static_cast<long>(points.size());
    if (rec.success) {
      rec.reason = Termination::kTarget;
      break;
    }
    try {
      opt->tell(losses);
    } catch (const FactorizationError&) {
      rec.reason = Termination::kNumericalError;
      break;
    } catch (const std::domain_error&) {
      rec.reason = Termination::kNumericalError;
      break;
    }
    ++iteration;
    if (config.trace) {
      if (auto d = opt->diagnostics()) {
        const Fitness best = problem.sense() == Sense::kMinimize ? *best_loss : -*best_loss;
        rec.trace.push_back({iteration, rec.evaluations, best.value(), d->sigma,
                             d->mean.cwiseAbs(), d->marginal_std});
      }
    }
  }
  if (best_loss) {
    rec.best_f = (problem.sense() == Sense::kMinimize ? *best_loss : -*best_loss).value();
  }
  return rec;
}

std::vector<TrialRecord> run_trials(const RunConfig& config) {
  config.validate();
  std::vector<TrialRecord> records(config.trials);
  const int workers = std::min(config.jobs, config.trials);
  if (workers <= 1) {
    for (int i = 0; i < config.trials; ++i) records[i] = run_trial(config, i);
    return records;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < config.trials; i = next++) {
        try {
          records[i] = run_trial(config, i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("percentile: empty data");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile: q outside [0, 1]");
  const double h = (sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<SummaryRow> aggregate(std::span<const TrialRecord> records) {
  using Key = std::tuple<std::string, std::string, int>;
  std::map<Key, std::vector<const TrialRecord*>> cells;
  for (const auto& r : records) cells[{r.algorithm, r.problem, r.dim}].push_back(&r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, recs] : cells) {
    SummaryRow row;
    std::tie(row.algorithm, row.problem, row.dim) = key;
    row.trials = static_cast<int>(recs.size());
    std::vector<double> evals;
    for (const auto* r : recs) {
      if (r->success) evals.push_back(static_cast<double>(r->evaluations));
    }
    row.successes = static_cast<int>(evals.size());
    row.success_rate = static_cast<double>(row.successes) / row.trials;
    if (!evals.empty()) {
      std::sort(evals.begin(), evals.end());
      row.median = percentile(evals, 0.5);
      row.q25 = percentile(evals, 0.25);
      row.q75 = percentile(evals, 0.75);
      row.adjusted_median = *row.median / row.success_rate;
      row.adjusted_q25 = *row.q25 / row.success_rate;
      row.adjusted_q75 = *row.q75 / row.success_rate;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_records_csv(std::ostream& os, std::span<const TrialRecord> records) {
  os << "algo,problem,dim,trial,seed,success,evaluations,best_f,reason\n";
  for (const auto& r : records) {
    os << r.algorithm << ',' << r.problem << ',' << r.dim << ',' << r.trial << ',' << r.seed
       << ',' << (r.success ? 1 : 0) << ',' << r.evaluations << ',' << format_double(r.best_f)
       << ',' << to_string(r.reason) << '\n';
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("records CSV: missing header");
  std::vector<TrialRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9) throw std::invalid_argument("records CSV: expected 9 fields: " + line);
    TrialRecord r;
    r.algorithm = f[0];
    r.problem = f[1];
    r.dim = parse_number<int>(f[2], "dim");
    r.trial = parse_number<int>(f[3], "trial");
    r.seed = parse_number<std::uint64_t>(f[4], "seed");
    r.success = parse_number<int>(f[5], "success") != 0;
    r.evaluations = parse_number<long>(f[6], "evaluations");
    r.best_f = parse_number<double>(f[7], "best_f");
    r.reason = termination_from_string(f[8]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  os << "algo,problem,dim,trials,successes,success_rate,median,q25,q75,"
        "adjusted_median,adjusted_q25,adjusted_q75\n";
  for (const auto& r : rows) {
    os << r.algorithm << ',' << r.problem << ',' << r.dim << ',' << r.trials << ','
       << r.successes << ',' << format_double(r.success_rate) << ',' << opt(r.median) << ','
       << opt(r.q25) << ',' << opt(r.q75) << ',' << opt(r.adjusted_median) << ','
       << opt(r.adjusted_q25) << ',' << opt(r.adjusted_q75) << '\n';
  }
}

void write_trace_csv(std::ostream& os, std::span<const TrialRecord> records) {
  os << "algo,problem,dim,trial,iteration,evaluations,best_f,sigma,coord,abs_mean,marginal_std\n";
  for (const auto& r : records) {
    for (const auto& row : r.trace) {
      for (Eigen::Index j = 0; j < row.abs_mean.size(); ++j) {
        os << r.algorithm << ',' << r.problem << ',' << r.dim << ',' << r.trial << ','
           << row.iteration << ',' << row.evaluations << ',' << format_double(row.best_f)
           << ',' << format_double(row.sigma) << ',' << j << ','
           << format_double(row.abs_mean(j)) << ',' << format_double(row.marginal_std(j))
           << '\n';
      }
    }
  }
}

std::vector<RunConfig> load_config_matrix(std::istream& is) {
  const nlohmann::json doc = nlohmann::json::parse(is);
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
  static const std::vector<std::string> known{
      "algo",   "problem", "dim",         "n_co",          "trials",      "seed",
      "budget_mult", "target", "eig_floor", "postprocess", "ablate_mean_v", "trace",
      "incremental_cholesky", "jobs", "out"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("config: unknown field '" + key + "'");
    }
  }
  auto as_list = [&](const char* key, auto fallback) {
    using T = decltype(fallback);
    std::vector<T> out;
    if (!doc.contains(key)) {
      out.push_back(fallback);
    } else if (doc[key].is_array()) {
      for (const auto& v : doc[key]) out.push_back(v.get<T>());
    } else {
      out.push_back(doc[key].get<T>());
    }
    if (out.empty()) throw std::invalid_argument(std::string("config: empty list for ") + key);
    return out;
  };

  RunConfig base;
  if (doc.contains("n_co") && !doc["n_co"].is_null()) base.n_co = doc["n_co"].get<int>();
  base.trials = doc.value("trials", base.trials);
  base.seed = doc.value("seed", base.seed);
  base.budget_multiplier = doc.value("budget_mult", base.budget_multiplier);
  base.target = doc.value("target", base.target);
  base.eig_floor = doc.value("eig_floor", base.eig_floor);
  base.postprocess = doc.value("postprocess", base.postprocess);
  base.ablate_mean_v = doc.value("ablate_mean_v", base.ablate_mean_v);
  base.trace = doc.value("trace", base.trace);
  base.incremental_cholesky = doc.value("incremental_cholesky", base.incremental_cholesky);
  base.jobs = doc.value("jobs", base.jobs);
  base.out = doc.value("out", base.out);

  std::vector<RunConfig> matrix;
  for (const auto& algo : as_list("algo", base.algorithm)) {
    for (const auto& problem : as_list("problem", base.problem)) {
      for (int dim : as_list("dim", base.dim)) {
        RunConfig c = base;
        c.algorithm = algo;
        c.problem = problem;
        c.dim = dim;
        matrix.push_back(std::move(c));
      }
    }
  }
  return matrix;
}

}  // namespace cmawm
