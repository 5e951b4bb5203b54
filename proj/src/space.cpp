#include "cmawm/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cmawm {

SearchSpace::SearchSpace(int n_continuous, std::vector<std::vector<double>> discrete_sets)
    : n_continuous_(n_continuous), values_(std::move(discrete_sets)) {
  if (n_continuous_ < 0) throw std::invalid_argument("SearchSpace: negative N_co");
  if (dimension() < 1) throw std::invalid_argument("SearchSpace: dimension must be >= 1");
  midpoints_.reserve(values_.size());
  for (std::size_t s = 0; s < values_.size(); ++s) {
    const auto& z = values_[s];
    if (z.size() < 2) {
      throw std::invalid_argument("SearchSpace: discrete set " + std::to_string(s) +
                                  " needs at least two values");
    }
    std::vector<double> mids(z.size() - 1);
    for (std::size_t k = 0; k + 1 < z.size(); ++k) {
      if (!(z[k] < z[k + 1])) {
        throw std::invalid_argument("SearchSpace: discrete set " + std::to_string(s) +
                                    " is not strictly increasing");
      }
      mids[k] = 0.5 * (z[k] + z[k + 1]);
    }
    midpoints_.push_back(std::move(mids));
  }
}

std::vector<double> SearchSpace::integer_range(int lo, int hi) {
  if (hi <= lo) throw std::invalid_argument("integer_range: need lo < hi");
  std::vector<double> z;
  for (int k = lo; k <= hi; ++k) z.push_back(k);
  return z;
}

bool SearchSpace::all_discrete_binary() const {
  return std::all_of(values_.begin(), values_.end(), [](const auto& z) {
    return z.size() == 2 && z[0] == 0.0 && z[1] == 1.0;
  });
}

std::size_t SearchSpace::slot(int j) const {
  if (j < n_continuous_ || j >= dimension()) {
    throw std::logic_error("SearchSpace: dimension " + std::to_string(j) +
                           " is not a discrete dimension");
  }
  return static_cast<std::size_t>(j - n_continuous_);
}

std::span<const double> SearchSpace::values(int j) const { return values_[slot(j)]; }

std::span<const double> SearchSpace::midpoints(int j) const { return midpoints_[slot(j)]; }

bool SearchSpace::is_evenly_spaced(int j) const {
  const auto& z = values_[slot(j)];
  const double gap = z[1] - z[0];
  for (std::size_t k = 1; k + 1 < z.size(); ++k) {
    if (std::abs((z[k + 1] - z[k]) - gap) > 1e-12 * std::max(1.0, std::abs(gap))) {
      return false;
    }
  }
  return true;
}

std::size_t SearchSpace::encode_index(int j, double v) const {
  const auto& mids = midpoints_[slot(j)];
  // First midpoint with v <= midpoint; past-the-end means the largest value.
  return static_cast<std::size_t>(std::lower_bound(mids.begin(), mids.end(), v) -
                                  mids.begin());
}

double SearchSpace::encode_coordinate(int j, double v) const {
  return values_[slot(j)][encode_index(j, v)];
}

FeasiblePoint SearchSpace::encode(const Vector& v) const {
  if (v.size() != dimension()) {
    throw std::invalid_argument("encode: vector length does not match the space");
  }
  FeasiblePoint out{v};
  for (int j = n_continuous_; j < dimension(); ++j) out.values(j) = encode_coordinate(j, v(j));
  return out;
}

bool SearchSpace::is_edge(int j, double m) const {
  const std::size_t k = encode_index(j, m);
  return k == 0 || k + 1 == values_[slot(j)].size();
}

double SearchSpace::nearest_midpoint(int j, double m) const {
  const auto& mids = midpoints_[slot(j)];
  const auto it = std::lower_bound(mids.begin(), mids.end(), m);
  if (it == mids.begin()) return mids.front();
  if (it == mids.end()) return mids.back();
  const double below = *(it - 1);
  const double above = *it;
  return (m - below <= above - m) ? below : above;
}

std::pair<double, double> SearchSpace::bracketing_midpoints(int j, double m) const {
  const auto& mids = midpoints_[slot(j)];
  const std::size_t k = encode_index(j, m);
  if (k == 0 || k >= mids.size()) {
    throw std::logic_error("bracketing_midpoints: encoded mean is an extreme value");
  }
  return {mids[k - 1], mids[k]};
}

}  // namespace cmawm
