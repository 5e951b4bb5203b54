#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cmawm/numerics.hpp"
#include "cmawm/space.hpp"

namespace cmawm {

/// Objective value, compared lexicographically on (primary, refinement).
///
/// Almost every objective only uses `primary`. The refinement carries exact
/// low-order information for objectives whose range exceeds what one double
/// can order (BinVal beyond 53 bits).
struct Fitness {
  double primary = 0.0;
  double refinement = 0.0;

  constexpr Fitness() = default;
  constexpr Fitness(double value) : primary(value) {}  // NOLINT: implicit by intent
  constexpr Fitness(double p, double r) : primary(p), refinement(r) {}

  double value() const noexcept { return primary + refinement; }
  constexpr Fitness operator-() const { return {-primary, -refinement}; }
  constexpr auto operator<=>(const Fitness&) const = default;
};

/// Minimized by every optimizer in this library.
using Objective = std::function<Fitness(const FeasiblePoint&)>;

/// Snapshot of a Gaussian search model for traces.
struct Diagnostics {
  double sigma = 0.0;
  Vector mean;
  Vector marginal_std;
};

/// Ask/tell optimizer over a SearchSpace. Losses are minimized.
class Optimizer {
 public:
  virtual ~Optimizer() = default;

  virtual std::string_view name() const = 0;

  /// Candidates to evaluate next, in draw order.
  virtual std::vector<FeasiblePoint> ask() = 0;

  /// Losses for the points of the last ask(), same order.
  virtual void tell(std::span<const Fitness> losses) = 0;

  /// True when the smallest eigenvalue of sigma^2 C is below `floor`.
  /// Optimizers without a covariance never trigger.
  virtual bool covariance_below(double /*floor*/) { return false; }

  virtual std::optional<Diagnostics> diagnostics() const { return std::nullopt; }

  /// ask, evaluate every point, tell. Returns the number of evaluations.
  std::size_t step(const Objective& f) {
    const auto points = ask();
    std::vector<Fitness> losses;
    losses.reserve(points.size());
    for (const auto& p : points) losses.push_back(f(p));
    tell(losses);
    return points.size();
  }
};

}  // namespace cmawm
