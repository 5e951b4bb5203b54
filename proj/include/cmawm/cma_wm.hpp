#pragma once

#include <vector>

#include "cmawm/margin.hpp"
#include "cmawm/optimizer.hpp"
#include "cmawm/rng.hpp"
#include "cmawm/space.hpp"

namespace cmawm {

struct PopulationHyperparams {
  int lambda = 0;
  int mu = 0;
  Vector weights;  // length lambda, positive ones sum to 1
  double c_m = 1.0;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
  double c_c = 0.0;
  double c_1 = 0.0;
  double c_mu = 0.0;
  double alpha = 0.0;
  double mu_w = 0.0;
};

/// Default CMA-ES settings (active weights included) with lambda =
/// 4 + floor(3 ln N) and margin alpha = 1 / (lambda N).
PopulationHyperparams default_population_hyperparams(int n);

/// Same defaults for an explicit population size.
PopulationHyperparams population_hyperparams(int n, int lambda);

struct DistributionState {
  Vector mean;
  SymmetricMatrix cov;
  double sigma = 1.0;
  Vector a;
  Vector p_sigma;
  Vector p_c;
  long t = 0;
};

struct Sample {
  Vector xi;
  Vector y;
  Vector x;
  Vector v;
  FeasiblePoint v_bar;
  Fitness fitness;
};

/// Discrete-domain reparameterizations applied after the margin correction.
enum class PostProcess {
  kNone,
  /// m_j <- (m_j - 1/2) / sigma + 1/2, sigma <- 1 (fully binary domains).
  kBinaryRecentre,
  /// sigma <- sigma * min A, A <- A / min A (integer domains).
  kFoldA,
};

/// Rescales a fully binary state so that sigma = 1 while every standardized
/// offset (m_j - 1/2) / (sigma A_j sqrt(C_jj)) is preserved.
DistributionState binary_postprocess(DistributionState state, const SearchSpace& space);

/// (mu/mu_w, lambda)-CMA-ES with margin.
class CmaWithMargin final : public Optimizer {
 public:
  CmaWithMargin(SearchSpace space, Vector mean0, double sigma0, RandomStream rng,
                PopulationHyperparams hyper, PostProcess post = PostProcess::kNone);

  std::string_view name() const override { return "cma-wm"; }

  std::vector<FeasiblePoint> ask() override;

  /// ask() with caller-provided standard-normal draws (one per offspring).
  std::vector<FeasiblePoint> ask_with(std::vector<Vector> xi);

  void tell(std::span<const Fitness> losses) override;

  bool covariance_below(double floor) override;
  std::optional<Diagnostics> diagnostics() const override;

  const DistributionState& state() const noexcept { return state_; }
  const PopulationHyperparams& hyperparams() const noexcept { return hyper_; }
  const SearchSpace& space() const noexcept { return space_; }
  /// Samples of the pending ask(), in draw order.
  const std::vector<Sample>& samples() const noexcept { return samples_; }

 private:
  SearchSpace space_;
  PopulationHyperparams hyper_;
  PostProcess post_;
  RandomStream rng_;
  DistributionState state_;
  Matrix sqrt_cov_;
  double eig_lower_bound_ = 1.0;  // lower bound on min eigenvalue of C
  std::vector<Sample> samples_;
};

}  // namespace cmawm
