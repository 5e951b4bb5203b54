#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "cmawm/numerics.hpp"

namespace cmawm {

/// A point of the mixed search space: continuous coordinates first, then one
/// admissible value per discrete coordinate.
struct FeasiblePoint {
  Vector values;
};

/// R^{N_co} x Z_{N_co+1} x ... x Z_N. Continuous dimensions come first.
/// Immutable after construction.
class SearchSpace {
 public:
  /// Each discrete set must be strictly increasing with at least two values.
  SearchSpace(int n_continuous, std::vector<std::vector<double>> discrete_sets);

  static std::vector<double> integer_range(int lo, int hi);
  static std::vector<double> binary() { return {0.0, 1.0}; }

  int dimension() const noexcept { return n_continuous_ + n_discrete(); }
  int n_continuous() const noexcept { return n_continuous_; }
  int n_discrete() const noexcept { return static_cast<int>(values_.size()); }
  bool is_discrete(int j) const noexcept { return j >= n_continuous_; }
  bool fully_discrete() const noexcept { return n_continuous_ == 0; }
  bool all_discrete_binary() const;
  bool has_discrete() const noexcept { return !values_.empty(); }

  /// Admissible values / midpoints of global dimension j (must be discrete).
  std::span<const double> values(int j) const;
  std::span<const double> midpoints(int j) const;

  bool is_evenly_spaced(int j) const;

  /// Index k of the admissible value that Enc assigns to v_j. A value exactly
  /// on a midpoint goes to the lower neighbour.
  std::size_t encode_index(int j, double v) const;
  double encode_coordinate(int j, double v) const;
  FeasiblePoint encode(const Vector& v) const;

  /// True when Enc(m)_j is the smallest or largest admissible value.
  bool is_edge(int j, double m) const;

  /// Midpoint closest to m; ties go to the lower midpoint.
  double nearest_midpoint(int j, double m) const;

  /// (largest midpoint < m, smallest midpoint >= m). Only defined when Enc(m)_j
  /// is an interior value; otherwise throws std::logic_error.
  std::pair<double, double> bracketing_midpoints(int j, double m) const;

 private:
  std::size_t slot(int j) const;

  int n_continuous_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<double>> midpoints_;
};

}  // namespace cmawm
