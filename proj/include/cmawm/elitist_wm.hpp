#pragma once

#include "cmawm/margin.hpp"
#include "cmawm/optimizer.hpp"
#include "cmawm/rng.hpp"
#include "cmawm/space.hpp"

namespace cmawm {

struct ElitistHyperparams {
  double d_sigma = 0.0;
  double p_target = 0.0;
  double c_p = 0.0;
  double c_c = 0.0;
  double c_1 = 0.0;
  double p_thresh = 0.0;
  double alpha = 0.0;
};

/// Recommended setting: d_sigma = 1 + N/2, p_target = 2/11, c_p = 1/12,
/// c_c = 2/(N+2), c_1 = 2/(N^2+6), p_thresh = 0.44, alpha = 1/N.
ElitistHyperparams default_elitist_hyperparams(int n);

struct ElitistState {
  Vector mean;
  SymmetricMatrix cov;
  double sigma = 1.0;
  Vector a;
  Vector p_c;
  double p_succ = 0.0;
  Fitness f_best;
  long t = 0;
};

struct ElitistOptions {
  /// Accept the encoded candidate as the new mean. Turning this off accepts
  /// the raw sample instead (ablation); the mean then leaves the lattice and
  /// the mean-moving margin correction is used.
  bool discretize_mean = true;
  /// Fold min A into sigma after the margin correction (discrete domains).
  bool postprocess = false;
  /// Maintain the Cholesky factor by O(N^2) rank-one updates instead of
  /// refactorizing after each accepted step.
  bool incremental_cholesky = false;
};

/// sigma <- sigma * min A, A <- A / min A.
ElitistState postprocess_discrete(ElitistState state);

/// (1+1)-CMA-ES with margin.
///
/// The first ask() returns the encoded initial mean; its loss becomes f_best
/// and counts as one evaluation. Every later ask() returns one candidate.
class ElitistCmaWithMargin final : public Optimizer {
 public:
  ElitistCmaWithMargin(SearchSpace space, const Vector& mean0, double sigma0, RandomStream rng,
                       ElitistHyperparams hyper, ElitistOptions options = {});

  std::string_view name() const override { return "elitist-wm"; }

  std::vector<FeasiblePoint> ask() override;

  /// ask() with a caller-provided standard-normal draw.
  std::vector<FeasiblePoint> ask_with(Vector xi);

  void tell(std::span<const Fitness> losses) override;

  bool covariance_below(double floor) override;
  std::optional<Diagnostics> diagnostics() const override;

  bool initialized() const noexcept { return initialized_; }
  const ElitistState& state() const noexcept { return state_; }
  const ElitistHyperparams& hyperparams() const noexcept { return hyper_; }
  const Matrix& sqrt_cov() const noexcept { return sqrt_cov_; }
  /// Whether the last tell() accepted the candidate.
  bool last_success() const noexcept { return last_success_; }

 private:
  void update(Fitness loss);

  SearchSpace space_;
  ElitistHyperparams hyper_;
  ElitistOptions options_;
  RandomStream rng_;
  ElitistState state_;
  Matrix sqrt_cov_;
  double eig_lower_bound_ = 1.0;
  bool initialized_ = false;
  bool pending_ = false;
  bool last_success_ = false;
  Vector pending_y_;
  Vector pending_v_;
  FeasiblePoint pending_point_;
};

}  // namespace cmawm
