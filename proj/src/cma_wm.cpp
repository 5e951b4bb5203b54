#include "cmawm/cma_wm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cmawm {

PopulationHyperparams default_population_hyperparams(int n) {
  if (n < 1) throw std::invalid_argument("default_population_hyperparams: N must be >= 1");
  return population_hyperparams(n, 4 + static_cast<int>(std::floor(3.0 * std::log(n))));
}

PopulationHyperparams population_hyperparams(int n, int lambda) {
  if (n < 1 || lambda < 2) throw std::invalid_argument("population_hyperparams: bad N or lambda");
  const double nn = n;
  PopulationHyperparams h;
  h.lambda = lambda;
  h.mu = lambda / 2;

  Vector raw(lambda);
  for (int i = 0; i < lambda; ++i) raw(i) = std::log((lambda + 1) / 2.0) - std::log(i + 1.0);

  double pos_sum = 0.0, pos_sq = 0.0, neg_sum = 0.0, neg_sq = 0.0;
  for (int i = 0; i < lambda; ++i) {
    if (raw(i) > 0.0) {
      pos_sum += raw(i);
      pos_sq += raw(i) * raw(i);
    } else {
      neg_sum += -raw(i);
      neg_sq += raw(i) * raw(i);
    }
  }
  const double mu_eff = pos_sum * pos_sum / pos_sq;
  h.mu_w = mu_eff;

  h.c_m = 1.0;
  h.c_sigma = (mu_eff + 2.0) / (nn + mu_eff + 5.0);
  h.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nn + 1.0)) - 1.0) +
              h.c_sigma;
  h.c_c = (4.0 + mu_eff / nn) / (nn + 4.0 + 2.0 * mu_eff / nn);
  h.c_1 = 2.0 / ((nn + 1.3) * (nn + 1.3) + mu_eff);
  h.c_mu = std::min(1.0 - h.c_1,
                    2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nn + 2.0) * (nn + 2.0) + mu_eff));

  double neg_scale = 0.0;
  if (neg_sum > 0.0) {
    const double mu_eff_neg = neg_sum * neg_sum / neg_sq;
    const double alpha_mu = 1.0 + h.c_1 / h.c_mu;
    const double alpha_mu_eff = 1.0 + 2.0 * mu_eff_neg / (mu_eff + 2.0);
    const double alpha_posdef = (1.0 - h.c_1 - h.c_mu) / (nn * h.c_mu);
    neg_scale = std::min({alpha_mu, alpha_mu_eff, alpha_posdef}) / neg_sum;
  }
  h.weights.resize(lambda);
  for (int i = 0; i < lambda; ++i) {
    h.weights(i) = raw(i) > 0.0 ? raw(i) / pos_sum : raw(i) * neg_scale;
  }
  h.alpha = 1.0 / (lambda * nn);
  return h;
}

DistributionState binary_postprocess(DistributionState state, const SearchSpace& space) {
  if (!space.fully_discrete() || !space.all_discrete_binary()) {
    throw std::logic_error("binary_postprocess: requires a fully binary search space");
  }
  constexpr double mid = 0.5;
  state.mean = ((state.mean.array() - mid) / state.sigma + mid).matrix();
  state.sigma = 1.0;
  return state;
}

CmaWithMargin::CmaWithMargin(SearchSpace space, Vector mean0, double sigma0, RandomStream rng,
                             PopulationHyperparams hyper, PostProcess post)
    : space_(std::move(space)), hyper_(std::move(hyper)), post_(post), rng_(rng) {
  const int n = space_.dimension();
  if (mean0.size() != n) throw std::invalid_argument("CmaWithMargin: mean0 has wrong length");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("CmaWithMargin: sigma0 must be positive");
  if (hyper_.weights.size() != hyper_.lambda || hyper_.mu < 1 || hyper_.mu > hyper_.lambda) {
    throw std::invalid_argument("CmaWithMargin: inconsistent hyperparameters");
  }
  if (space_.has_discrete()) validate_margin(space_, hyper_.alpha);
  if (post_ == PostProcess::kBinaryRecentre && !space_.all_discrete_binary()) {
    throw std::invalid_argument("CmaWithMargin: binary post-process needs a binary space");
  }
  state_.mean = std::move(mean0);
  state_.cov = SymmetricMatrix::identity(n);
  state_.sigma = sigma0;
  state_.a = Vector::Ones(n);
  state_.p_sigma = Vector::Zero(n);
  state_.p_c = Vector::Zero(n);
  sqrt_cov_ = Matrix::Identity(n, n);
}

std::vector<FeasiblePoint> CmaWithMargin::ask() {
  std::vector<Vector> xi;
  xi.reserve(hyper_.lambda);
  for (int i = 0; i < hyper_.lambda; ++i) xi.push_back(rng_.standard_normal_vector(space_.dimension()));
  return ask_with(std::move(xi));
}

std::vector<FeasiblePoint> CmaWithMargin::ask_with(std::vector<Vector> xi) {
  if (static_cast<int>(xi.size()) != hyper_.lambda) {
    throw std::invalid_argument("ask_with: need exactly lambda draws");
  }
  samples_.clear();
  std::vector<FeasiblePoint> points;
  for (auto& z : xi) {
    Sample s;
    s.y = sqrt_cov_.triangularView<Eigen::Lower>() * z;
    s.xi = std::move(z);
    s.x = state_.mean + state_.sigma * s.y;
    s.v = state_.mean + state_.sigma * state_.a.cwiseProduct(s.y);
    s.v_bar = space_.encode(s.v);
    points.push_back(s.v_bar);
    samples_.push_back(std::move(s));
  }
  return points;
}

void CmaWithMargin::tell(std::span<const Fitness> losses) {
  if (samples_.empty() || losses.size() != samples_.size()) {
    throw std::logic_error("CmaWithMargin::tell: losses do not match the last ask()");
  }
  const int n = space_.dimension();
  const int lambda = hyper_.lambda;
  for (int i = 0; i < lambda; ++i) samples_[i].fitness = losses[i];

  std::vector<int> order(lambda);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return samples_[lhs].fitness < samples_[rhs].fitness;
  });

  DistributionState& st = state_;
  const double cs = hyper_.c_sigma;
  const double cc = hyper_.c_c;
  const double c1 = hyper_.c_1;
  const double cmu = hyper_.c_mu;

  Vector mean_shift = Vector::Zero(n);
  Vector xi_w = Vector::Zero(n);
  Vector y_w = Vector::Zero(n);
  for (int k = 0; k < hyper_.mu; ++k) {
    const Sample& s = samples_[order[k]];
    const double w = hyper_.weights(k);
    mean_shift += w * (s.x - st.mean);
    xi_w += w * s.xi;
    y_w += w * s.y;
  }
  st.mean += hyper_.c_m * mean_shift;

  st.p_sigma = (1.0 - cs) * st.p_sigma + std::sqrt(cs * (2.0 - cs) * hyper_.mu_w) * xi_w;
  const double chi_n = expected_chi_norm(n);
  const double ps_norm = st.p_sigma.norm();
  const double bias = std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * (st.t + 1)));
  const bool h_sigma = ps_norm / bias < (1.4 + 2.0 / (n + 1.0)) * chi_n;
  st.p_c = (1.0 - cc) * st.p_c;
  if (h_sigma) st.p_c += std::sqrt(cc * (2.0 - cc) * hyper_.mu_w) * y_w;

  const double decay = 1.0 - c1 - cmu * hyper_.weights.sum() +
                       (h_sigma ? 0.0 : c1 * cc * (2.0 - cc));
  Matrix cov = decay * st.cov.dense();
  double negative_mass = 0.0;
  for (int k = 0; k < lambda; ++k) {
    const Sample& s = samples_[order[k]];
    double w = hyper_.weights(k);
    if (w < 0.0) {
      const double xi_sq = s.xi.squaredNorm();
      if (xi_sq == 0.0) continue;
      w *= n / xi_sq;
      negative_mass += cmu * w * s.y.squaredNorm();
    }
    if (w != 0.0) cov.noalias() += (cmu * w) * s.y * s.y.transpose();
  }
  cov.noalias() += c1 * st.p_c * st.p_c.transpose();
  st.cov.assign(std::move(cov));

  st.sigma *= std::exp((cs / hyper_.d_sigma) * (ps_norm / chi_n - 1.0));

  // Weyl: lambda_min(decay C + PSD + sum of negative rank-ones) >= decay
  // lambda_min(C) + sum of the negative terms' traces.
  eig_lower_bound_ = decay > 0.0 ? decay * eig_lower_bound_ + negative_mass
                                 : -std::numeric_limits<double>::infinity();

  MarginInputs margin{st.mean, st.cov.diag(), st.sigma, st.a, hyper_.alpha};
  margin = apply_margin_population(space_, std::move(margin));
  st.mean = std::move(margin.mean);
  st.a = std::move(margin.a);

  switch (post_) {
    case PostProcess::kNone:
      break;
    case PostProcess::kBinaryRecentre:
      st = binary_postprocess(std::move(st), space_);
      break;
    case PostProcess::kFoldA:
      fold_min_a_into_sigma(st.sigma, st.a);
      break;
  }
  ++st.t;

  sqrt_cov_ = factor_sqrt(st.cov);
  samples_.clear();
}

bool CmaWithMargin::covariance_below(double floor) {
  const double s2 = state_.sigma * state_.sigma;
  if (s2 * eig_lower_bound_ >= floor) return false;
  eig_lower_bound_ = min_eigenvalue(state_.cov);
  return s2 * eig_lower_bound_ < floor;
}

std::optional<Diagnostics> CmaWithMargin::diagnostics() const {
  Diagnostics d;
  d.sigma = state_.sigma;
  d.mean = state_.mean;
  d.marginal_std = state_.sigma * state_.a.cwiseProduct(state_.cov.diag().cwiseSqrt());
  return d;
}

}  // namespace cmawm
