#include "cmawm/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace cmawm {

namespace {

int require_binary(const SearchSpace& space, const char* who) {
  if (!space.fully_discrete() || !space.all_discrete_binary()) {
    throw std::invalid_argument(std::string(who) + ": requires a fully binary search space");
  }
  return space.dimension();
}

}  // namespace

ProbabilityVector ProbabilityVector::uniform(int n) {
  const double margin = 1.0 / n;
  return {Vector::Constant(n, 0.5), margin, 1.0 - margin};
}

void ProbabilityVector::clamp() { p = p.cwiseMax(lo).cwiseMin(hi); }

Vector ProbabilityVector::sample(RandomStream& rng) const {
  Vector bits(p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) bits(j) = rng.bernoulli(p(j)) ? 1.0 : 0.0;
  return bits;
}

void cga_update(ProbabilityVector& pv, const Vector& winner, const Vector& loser, double rate) {
  for (Eigen::Index j = 0; j < pv.p.size(); ++j) {
    if (winner(j) != loser(j)) pv.p(j) += winner(j) > loser(j) ? rate : -rate;
  }
  pv.clamp();
}

void pbil_update(ProbabilityVector& pv, const Vector& best, double rate) {
  pv.p = (1.0 - rate) * pv.p + rate * best;
  pv.clamp();
}

Vector mutate_bits(const Vector& parent, double rate, RandomStream& rng) {
  Vector child = parent;
  for (Eigen::Index j = 0; j < child.size(); ++j) {
    if (rng.bernoulli(rate)) child(j) = 1.0 - child(j);
  }
  return child;
}

CompactGa::CompactGa(const SearchSpace& space, RandomStream rng)
    : rng_(rng), pv_(ProbabilityVector::uniform(require_binary(space, "CompactGa"))),
      rate_(1.0 / space.dimension()) {}

std::vector<FeasiblePoint> CompactGa::ask() {
  pending_ = {pv_.sample(rng_), pv_.sample(rng_)};
  return {FeasiblePoint{pending_[0]}, FeasiblePoint{pending_[1]}};
}

void CompactGa::tell(std::span<const Fitness> losses) {
  if (losses.size() != 2 || pending_.size() != 2) throw std::logic_error("CompactGa::tell: expected two losses");
  if (losses[0] < losses[1]) cga_update(pv_, pending_[0], pending_[1], rate_);
  else if (losses[1] < losses[0]) cga_update(pv_, pending_[1], pending_[0], rate_);
  pending_.clear();
}

Pbil::Pbil(const SearchSpace& space, RandomStream rng)
    : rng_(rng), pv_(ProbabilityVector::uniform(require_binary(space, "Pbil"))),
      rate_(1.0 / space.dimension()),
      lambda_(4 + static_cast<int>(std::floor(3.0 * std::log(space.dimension())))) {}

std::vector<FeasiblePoint> Pbil::ask() {
  pending_.clear();
  std::vector<FeasiblePoint> points;
  for (int i = 0; i < lambda_; ++i) {
    pending_.push_back(pv_.sample(rng_));
    points.push_back(FeasiblePoint{pending_.back()});
  }
  return points;
}

void Pbil::tell(std::span<const Fitness> losses) {
  if (losses.size() != pending_.size() || pending_.empty()) throw std::logic_error("Pbil::tell: size mismatch");
  std::size_t best = 0;
  for (std::size_t i = 1; i < losses.size(); ++i) {
    if (losses[i] < losses[best]) best = i;
  }
  pbil_update(pv_, pending_[best], rate_);
  pending_.clear();
}

OnePlusOneEa::OnePlusOneEa(const SearchSpace& space, RandomStream rng)
    : rng_(rng), rate_(1.0 / require_binary(space, "OnePlusOneEa")) {
  parent_.resize(space.dimension());
  for (Eigen::Index j = 0; j < parent_.size(); ++j) parent_(j) = rng_.bernoulli(0.5) ? 1.0 : 0.0;
}

std::vector<FeasiblePoint> OnePlusOneEa::ask() {
  if (!initialized_) return {FeasiblePoint{parent_}};
  child_ = mutate_bits(parent_, rate_, rng_);
  return {FeasiblePoint{child_}};
}

void OnePlusOneEa::tell(std::span<const Fitness> losses) {
  if (losses.size() != 1) throw std::logic_error("OnePlusOneEa::tell: expected one loss");
  if (!initialized_) {
    parent_loss_ = losses[0];
    initialized_ = true;
    return;
  }
  if (losses[0] <= parent_loss_) {
    parent_ = child_;
    parent_loss_ = losses[0];
  }
}

}  // namespace cmawm
