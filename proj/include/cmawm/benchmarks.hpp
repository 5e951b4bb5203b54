#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmawm/optimizer.hpp"
#include "cmawm/space.hpp"

namespace cmawm {

enum class Sense { kMinimize, kMaximize };

/// A benchmark objective together with its search space and success rule.
class Problem {
 public:
  using Function = std::function<Fitness(const FeasiblePoint&)>;

  Problem(std::string name, SearchSpace space, Sense sense, Function f);

  const std::string& name() const noexcept { return name_; }
  const SearchSpace& space() const noexcept { return space_; }
  Sense sense() const noexcept { return sense_; }

  /// Objective value in the problem's own sense.
  Fitness evaluate(const FeasiblePoint& x) const { return f_(x); }

  /// Value to minimize: the objective, negated for maximization problems.
  Fitness loss(const FeasiblePoint& x) const {
    return sense_ == Sense::kMinimize ? f_(x) : -f_(x);
  }

  /// Minimization problems succeed once value <= target. The maximization
  /// problems (all binary) succeed on the all-ones string, whatever target is.
  bool reached(const FeasiblePoint& x, const Fitness& value, double target) const;

 private:
  std::string name_;
  SearchSpace space_;
  Sense sense_;
  Function f_;
};

const std::vector<std::string>& problem_names();

/// Builds a named benchmark.
///
/// Mixed functions (sphere-one-max, sphere-leading-ones, ellipsoid-one-max,
/// ellipsoid-leading-ones) put n_co continuous dimensions before N - n_co
/// binary ones; n_co defaults to N/2 and N must then be even. sphere-int and
/// ellipsoid-int use integers in [-10, 10] after n_co continuous dimensions
/// (default 0). one-max, leading-ones and bin-val are fully binary.
Problem make_problem(std::string_view name, int n, std::optional<int> n_co = std::nullopt);

// Plain objective functions over raw coordinate blocks.
double one_max(std::span<const double> bits);
double leading_ones(std::span<const double> bits);
/// Exact lexicographic key for sum_j 2^{N-j} b_j: primary holds the top 53
/// bits, refinement the rest.
Fitness bin_val(std::span<const double> bits);

}  // namespace cmawm
