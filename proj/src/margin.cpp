#include "cmawm/margin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cmawm {

namespace {

void check_sizes(const SearchSpace& space, const MarginInputs& in) {
  const auto n = space.dimension();
  if (in.mean.size() != n || in.cov_diag.size() != n || in.a.size() != n) {
    throw std::invalid_argument("margin: state size does not match the search space");
  }
  if (!(in.sigma > 0.0)) throw std::domain_error("margin: sigma must be positive");
}

int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double MarginInputs::marginal_std(int j) const { return sigma * a(j) * std::sqrt(cov_diag(j)); }

void validate_margin(const SearchSpace& space, double alpha) {
  bool has_interior = false;
  for (int j = space.n_continuous(); j < space.dimension(); ++j) {
    if (space.values(j).size() > 2) has_interior = true;
  }
  const double upper = has_interior ? 1.0 / 3.0 : 0.5;
  if (!(alpha > 0.0 && alpha < upper)) {
    throw std::domain_error("margin: alpha = " + std::to_string(alpha) +
                            " outside (0, " + std::to_string(upper) + ")");
  }
}

double confidence_radius(const MarginInputs& in, int j, double gamma) {
  return std::sqrt(chi2_ppf_1dof(gamma)) * in.marginal_std(j);
}

TailPair tail_probabilities(const MarginInputs& in, int j, double l_low, double l_up) {
  const double s = in.marginal_std(j);
  if (!(s > 0.0)) throw std::domain_error("tail_probabilities: degenerate marginal");
  const double m = in.mean(j);
  return {normal_cdf((l_low - m) / s), normal_sf((l_up - m) / s)};
}

TailPair redistribute_tails(double p_low, double p_up, double alpha) {
  if (p_low < 0.0 || p_up < 0.0 || p_low + p_up > 1.0 + 1e-15) {
    throw std::domain_error("redistribute_tails: invalid tail probabilities");
  }
  const double half = 0.5 * alpha;
  const double p_mid = 1.0 - p_low - p_up;
  const double low1 = std::max(half, p_low);
  const double up1 = std::max(half, p_up);
  const double denom = low1 + up1 + p_mid - 3.0 * half;
  if (!(denom > 0.0)) {
    throw std::domain_error("redistribute_tails: correction infeasible for alpha = " +
                            std::to_string(alpha));
  }
  const double factor = (1.0 - low1 - up1 - p_mid) / denom;
  return {low1 + factor * (low1 - half), up1 + factor * (up1 - half)};
}

InteriorCorrection interior_parameters(double l_low, double l_up, double sigma, double c_jj,
                                       TailPair target) {
  if (!(target.low > 0.0 && target.low <= 0.5 && target.up > 0.0 && target.up <= 0.5)) {
    throw std::domain_error("interior_parameters: target tails must lie in (0, 1/2]");
  }
  // sqrt(chi2_ppf(1 - 2p)) = -Phi^{-1}(p) for p <= 1/2.
  const double root_low = -normal_quantile(target.low);
  const double root_up = -normal_quantile(target.up);
  const double total = root_low + root_up;
  if (total < 1e-12) throw std::domain_error("interior_parameters: degenerate tails");
  return {(l_low * root_up + l_up * root_low) / total,
          (l_up - l_low) / (sigma * std::sqrt(c_jj) * total), target};
}

InteriorCorrection correct_interior(const MarginInputs& in, int j, double l_low,
                                    double l_up) {
  const TailPair tails = tail_probabilities(in, j, l_low, l_up);
  const TailPair target = redistribute_tails(tails.low, tails.up, in.alpha);
  return interior_parameters(l_low, l_up, in.sigma, in.cov_diag(j), target);
}

double correct_edge_population(const SearchSpace& space, const MarginInputs& in, int j) {
  const double m = in.mean(j);
  const double mid = space.nearest_midpoint(j, m);
  const double ci = confidence_radius(in, j, 1.0 - 2.0 * in.alpha);
  return mid + sign(m - mid) * std::min(std::abs(m - mid), ci);
}

double correct_edge_elitist(const SearchSpace& space, const MarginInputs& in, int j) {
  const double m = in.mean(j);
  const double distance = std::abs(m - space.nearest_midpoint(j, m));
  const double q = chi2_ppf_1dof(1.0 - 2.0 * in.alpha);
  if (!(q > 0.0)) throw std::domain_error("correct_edge_elitist: alpha must be < 1/2");
  if (distance <= std::sqrt(q) * in.marginal_std(j)) return in.a(j);
  return distance / (in.sigma * std::sqrt(in.cov_diag(j) * q));
}

MarginInputs apply_margin_population(const SearchSpace& space, MarginInputs in) {
  check_sizes(space, in);
  if (!space.has_discrete()) return in;
  validate_margin(space, in.alpha);
  for (int j = space.n_continuous(); j < space.dimension(); ++j) {
    if (space.is_edge(j, in.mean(j))) {
      in.mean(j) = correct_edge_population(space, in, j);
    } else {
      const auto [l_low, l_up] = space.bracketing_midpoints(j, in.mean(j));
      const InteriorCorrection fix = correct_interior(in, j, l_low, l_up);
      in.mean(j) = fix.mean;
      in.a(j) = fix.a;
    }
  }
  return in;
}

MarginInputs apply_margin_elitist(const SearchSpace& space, MarginInputs in) {
  check_sizes(space, in);
  if (!space.has_discrete()) return in;
  validate_margin(space, in.alpha);
  for (int j = space.n_continuous(); j < space.dimension(); ++j) {
    if (space.is_edge(j, in.mean(j))) {
      in.a(j) = correct_edge_elitist(space, in, j);
      continue;
    }
    if (!space.is_evenly_spaced(j)) {
      throw std::logic_error("apply_margin_elitist: dimension " + std::to_string(j) +
                             " has unevenly spaced values");
    }
    const auto [l_low, l_up] = space.bracketing_midpoints(j, in.mean(j));
    const TailPair tails = tail_probabilities(in, j, l_low, l_up);
    if (std::abs(tails.low - tails.up) > 1e-12) {
      throw std::logic_error("apply_margin_elitist: mean of dimension " +
                             std::to_string(j) + " is not an admissible value");
    }
    const TailPair target = redistribute_tails(tails.low, tails.up, in.alpha);
    in.a(j) = interior_parameters(l_low, l_up, in.sigma, in.cov_diag(j), target).a;
  }
  return in;
}

void fold_min_a_into_sigma(double& sigma, Vector& a) {
  const double a_min = a.minCoeff();
  if (!(a_min > 0.0)) throw std::domain_error("fold_min_a_into_sigma: A must be positive");
  sigma *= a_min;
  a /= a_min;
}

}  // namespace cmawm
