#pragma once

#include "cmawm/optimizer.hpp"
#include "cmawm/rng.hpp"
#include "cmawm/space.hpp"

namespace cmawm {

/// Marginal probabilities of a 1 per bit, kept inside [lo, hi].
struct ProbabilityVector {
  Vector p;
  double lo = 0.0;
  double hi = 1.0;

  /// All entries 1/2, margins [1/N, 1 - 1/N].
  static ProbabilityVector uniform(int n);

  void clamp();
  Vector sample(RandomStream& rng) const;
};

/// Moves each bit where winner and loser differ by `rate` toward the winner,
/// then clamps.
void cga_update(ProbabilityVector& pv, const Vector& winner, const Vector& loser, double rate);

/// p <- (1 - rate) p + rate * best, then clamps.
void pbil_update(ProbabilityVector& pv, const Vector& best, double rate);

/// Flips each bit independently with probability `rate`.
Vector mutate_bits(const Vector& parent, double rate, RandomStream& rng);

/// Compact GA: two samples per iteration, learning rate 1/N. Equal losses
/// leave the probability vector untouched.
class CompactGa final : public Optimizer {
 public:
  CompactGa(const SearchSpace& space, RandomStream rng);

  std::string_view name() const override { return "cga"; }
  std::vector<FeasiblePoint> ask() override;
  void tell(std::span<const Fitness> losses) override;

  const ProbabilityVector& probabilities() const noexcept { return pv_; }

 private:
  RandomStream rng_;
  ProbabilityVector pv_;
  double rate_;
  std::vector<Vector> pending_;
};

/// PBIL with single-best update: lambda = 4 + floor(3 ln N) samples per
/// iteration, learning rate 1/N.
class Pbil final : public Optimizer {
 public:
  Pbil(const SearchSpace& space, RandomStream rng);

  std::string_view name() const override { return "pbil"; }
  std::vector<FeasiblePoint> ask() override;
  void tell(std::span<const Fitness> losses) override;

  const ProbabilityVector& probabilities() const noexcept { return pv_; }
  int lambda() const noexcept { return lambda_; }

 private:
  RandomStream rng_;
  ProbabilityVector pv_;
  double rate_;
  int lambda_;
  std::vector<Vector> pending_;
};

/// Static (1+1)-EA with mutation rate 1/N, accepting children that are not
/// worse. The first ask() returns a uniformly random initial parent.
class OnePlusOneEa final : public Optimizer {
 public:
  OnePlusOneEa(const SearchSpace& space, RandomStream rng);

  std::string_view name() const override { return "ea"; }
  std::vector<FeasiblePoint> ask() override;
  void tell(std::span<const Fitness> losses) override;

  const Vector& parent() const noexcept { return parent_; }
  Fitness parent_loss() const noexcept { return parent_loss_; }

 private:
  RandomStream rng_;
  double rate_;
  Vector parent_;
  Fitness parent_loss_;
  bool initialized_ = false;
  Vector child_;
};

}  // namespace cmawm
