#pragma once

#include "cmawm/numerics.hpp"
#include "cmawm/space.hpp"

namespace cmawm {

/// Distribution parameters that the margin correction reads and writes.
/// Only the diagonal of C matters because A is diagonal.
struct MarginInputs {
  Vector mean;
  Vector cov_diag;
  double sigma = 1.0;
  Vector a;
  double alpha = 0.0;

  /// Standard deviation of the marginal of v_j, sigma * A_j * sqrt(C_jj).
  double marginal_std(int j) const;
};

struct TailPair {
  double low = 0.0;
  double up = 0.0;
};

/// Checks alpha against what the corrections on this space need:
/// (0, 1/2) when every discrete set has two values, (0, 1/3) otherwise.
void validate_margin(const SearchSpace& space, double alpha);

/// sqrt(chi2_ppf(gamma) * sigma^2 * A_j^2 * C_jj).
double confidence_radius(const MarginInputs& in, int j, double gamma);

/// (Pr(v_j <= l_low), Pr(l_up < v_j)) for v_j ~ N(m_j, marginal_std(j)^2).
TailPair tail_probabilities(const MarginInputs& in, int j, double l_low, double l_up);

/// Lifts both tails to at least alpha/2 and takes the added mass
/// proportionally out of the parts above alpha/2.
TailPair redistribute_tails(double p_low, double p_up, double alpha);

struct InteriorCorrection {
  double mean;
  double a;
  TailPair target;
};

/// Mean and A_j that put exactly target.low below l_low and target.up above
/// l_up. Both targets must lie in (0, 1/2].
InteriorCorrection interior_parameters(double l_low, double l_up, double sigma, double c_jj,
                                       TailPair target);

/// Interior case: tails, redistribution, then interior_parameters.
InteriorCorrection correct_interior(const MarginInputs& in, int j, double l_low,
                                    double l_up);

/// Extreme-value case of the population variant: pulls m_j toward the
/// nearest midpoint until it lies within CI_{1-2 alpha}. Returns the new m_j.
double correct_edge_population(const SearchSpace& space, const MarginInputs& in, int j);

/// Extreme-value case of the elitist variant: m_j stays put and A_j grows
/// until the nearest midpoint lies within CI_{1-2 alpha}. Returns the new A_j.
double correct_edge_elitist(const SearchSpace& space, const MarginInputs& in, int j);

/// Margin correction moving both m and A (population CMA-ES with margin).
MarginInputs apply_margin_population(const SearchSpace& space, MarginInputs in);

/// Margin correction that never moves m; requires every discrete m_j to be an
/// admissible value on an evenly spaced set.
MarginInputs apply_margin_elitist(const SearchSpace& space, MarginInputs in);

/// sigma <- sigma * min_k A_k, A <- A / min_k A_k. Leaves every product
/// sigma * A_j unchanged and makes the smallest entry of A exactly 1.
void fold_min_a_into_sigma(double& sigma, Vector& a);

}  // namespace cmawm
