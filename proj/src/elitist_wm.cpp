#include "cmawm/elitist_wm.hpp"

#include <cmath>
#include <stdexcept>

namespace cmawm {

ElitistHyperparams default_elitist_hyperparams(int n) {
  if (n < 1) throw std::invalid_argument("default_elitist_hyperparams: N must be >= 1");
  const double nn = n;
  return {.d_sigma = 1.0 + nn / 2.0,
          .p_target = 2.0 / 11.0,
          .c_p = 1.0 / 12.0,
          .c_c = 2.0 / (nn + 2.0),
          .c_1 = 2.0 / (nn * nn + 6.0),
          .p_thresh = 0.44,
          .alpha = 1.0 / nn};
}

ElitistState postprocess_discrete(ElitistState state) {
  fold_min_a_into_sigma(state.sigma, state.a);
  return state;
}

ElitistCmaWithMargin::ElitistCmaWithMargin(SearchSpace space, const Vector& mean0,
                                           double sigma0, RandomStream rng,
                                           ElitistHyperparams hyper, ElitistOptions options)
    : space_(std::move(space)), hyper_(hyper), options_(options), rng_(rng) {
  const int n = space_.dimension();
  if (mean0.size() != n) throw std::invalid_argument("ElitistCmaWithMargin: mean0 has wrong length");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("ElitistCmaWithMargin: sigma0 must be positive");
  if (space_.has_discrete()) {
    validate_margin(space_, hyper_.alpha);
    if (options_.discretize_mean) {
      for (int j = space_.n_continuous(); j < n; ++j) {
        if (!space_.is_evenly_spaced(j)) {
          throw std::invalid_argument(
              "ElitistCmaWithMargin: discrete values must be evenly spaced (remap them to an "
              "evenly spaced set first)");
        }
      }
    }
  }
  state_.mean = space_.encode(mean0).values;
  state_.cov = SymmetricMatrix::identity(n);
  state_.sigma = sigma0;
  state_.a = Vector::Ones(n);
  state_.p_c = Vector::Zero(n);
  state_.p_succ = hyper_.p_target;
  sqrt_cov_ = Matrix::Identity(n, n);
}

std::vector<FeasiblePoint> ElitistCmaWithMargin::ask() {
  if (!initialized_) return {FeasiblePoint{state_.mean}};
  return ask_with(rng_.standard_normal_vector(space_.dimension()));
}

std::vector<FeasiblePoint> ElitistCmaWithMargin::ask_with(Vector xi) {
  if (!initialized_) throw std::logic_error("ask_with: initial mean not evaluated yet");
  if (xi.size() != space_.dimension()) throw std::invalid_argument("ask_with: wrong draw length");
  pending_y_ = sqrt_cov_.triangularView<Eigen::Lower>() * xi;
  pending_v_ = state_.mean + state_.sigma * state_.a.cwiseProduct(pending_y_);
  pending_point_ = space_.encode(pending_v_);
  pending_ = true;
  return {pending_point_};
}

void ElitistCmaWithMargin::tell(std::span<const Fitness> losses) {
  if (losses.size() != 1) throw std::logic_error("ElitistCmaWithMargin::tell: expected one loss");
  if (!initialized_) {
    state_.f_best = losses[0];
    initialized_ = true;
    return;
  }
  if (!pending_) throw std::logic_error("ElitistCmaWithMargin::tell: no pending candidate");
  pending_ = false;
  update(losses[0]);
}

void ElitistCmaWithMargin::update(Fitness loss) {
  ElitistState& st = state_;
  const ElitistHyperparams& h = hyper_;

  const bool success = loss <= st.f_best;
  last_success_ = success;
  st.p_succ = (1.0 - h.c_p) * st.p_succ + (success ? h.c_p : 0.0);
  st.sigma *= std::exp((st.p_succ - h.p_target) / (h.d_sigma * (1.0 - h.p_target)));

  if (success) {
    st.mean = options_.discretize_mean ? pending_point_.values : pending_v_;
    st.f_best = loss;
    const bool h_path = st.p_succ < h.p_thresh;
    st.p_c = (1.0 - h.c_c) * st.p_c;
    if (h_path) st.p_c += std::sqrt(h.c_c * (2.0 - h.c_c)) * pending_y_;
    const double decay = 1.0 - h.c_1 + (h_path ? 0.0 : h.c_1 * h.c_c * (2.0 - h.c_c));
    st.cov.rank_one_update(decay, h.c_1, st.p_c);
    eig_lower_bound_ *= decay;
    if (options_.incremental_cholesky) {
      cholesky_scaled_rank_one_update(sqrt_cov_, decay, h.c_1, st.p_c);
    } else {
      sqrt_cov_ = factor_sqrt(st.cov);
    }
  }

  MarginInputs margin{st.mean, st.cov.diag(), st.sigma, st.a, h.alpha};
  if (options_.discretize_mean) {
    st.a = apply_margin_elitist(space_, std::move(margin)).a;
  } else {
    margin = apply_margin_population(space_, std::move(margin));
    st.mean = std::move(margin.mean);
    st.a = std::move(margin.a);
  }

  if (options_.postprocess) fold_min_a_into_sigma(st.sigma, st.a);
  ++st.t;
}

bool ElitistCmaWithMargin::covariance_below(double floor) {
  const double s2 = state_.sigma * state_.sigma;
  if (s2 * eig_lower_bound_ >= floor) return false;
  eig_lower_bound_ = min_eigenvalue(state_.cov);
  return s2 * eig_lower_bound_ < floor;
}

std::optional<Diagnostics> ElitistCmaWithMargin::diagnostics() const {
  Diagnostics d;
  d.sigma = state_.sigma;
  d.mean = state_.mean;
  d.marginal_std = state_.sigma * state_.a.cwiseProduct(state_.cov.diag().cwiseSqrt());
  return d;
}

}  // namespace cmawm
