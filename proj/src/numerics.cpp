#include "cmawm/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cmawm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Acklam's rational approximation, lower half of the unit interval only.
double acklam_lower(double p) {
  static constexpr std::array<double, 6> a{
      -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{
      7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00};
  constexpr double p_break = 0.02425;

  if (p < p_break) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: probability must lie in (0, 1)");
  }
  if (p == 0.5) return 0.0;
  // 1 - p is exact for p >= 0.5, so the upper half reduces to the lower one.
  if (p > 0.5) return -normal_quantile(1.0 - p);

  double x = acklam_lower(p);
  // One Halley step on Phi(x) - p.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double chi2_ppf_1dof(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::domain_error("chi2_ppf_1dof: gamma must lie in [0, 1)");
  }
  if (gamma == 0.0) return 0.0;
  const double z = normal_quantile(0.5 * (1.0 + gamma));
  return z * z;
}

double expected_chi_norm(int n) {
  if (n < 1) throw std::domain_error("expected_chi_norm: dimension must be >= 1");
  const double nn = static_cast<double>(n);
  return std::sqrt(nn) * (1.0 - 1.0 / (4.0 * nn) + 1.0 / (21.0 * nn * nn));
}

SymmetricMatrix::SymmetricMatrix(Matrix m) { assign(std::move(m)); }

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n) {
  return SymmetricMatrix(Matrix::Identity(n, n));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& d) {
  return SymmetricMatrix(Matrix(d.asDiagonal()));
}

void SymmetricMatrix::assign(Matrix m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("SymmetricMatrix: matrix must be square");
  }
  symmetrize(m);
  m_ = std::move(m);
}

void SymmetricMatrix::rank_one_update(double scale, double weight, const Vector& v) {
  if (v.size() != m_.rows()) {
    throw std::invalid_argument("SymmetricMatrix::rank_one_update: size mismatch");
  }
  m_ *= scale;
  m_.noalias() += weight * v * v.transpose();
  symmetrize(m_);
}

void SymmetricMatrix::symmetrize(Matrix& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }
}

Matrix factor_sqrt(const SymmetricMatrix& c) {
  Eigen::LLT<Matrix> llt(c.dense());
  if (llt.info() != Eigen::Success) {
    const double lmin = min_eigenvalue(c);
    std::ostringstream msg;
    msg << "factor_sqrt: matrix is not positive definite (min eigenvalue " << lmin
        << ")";
    throw FactorizationError(msg.str(), lmin);
  }
  return llt.matrixL();
}

void cholesky_scaled_rank_one_update(Matrix& lower, double scale, double weight,
                                     const Vector& v) {
  const Eigen::Index n = lower.rows();
  if (v.size() != n || lower.cols() != n) {
    throw std::invalid_argument("cholesky_scaled_rank_one_update: size mismatch");
  }
  if (!(scale > 0.0) || weight < 0.0) {
    throw std::domain_error("cholesky_scaled_rank_one_update: need scale > 0, weight >= 0");
  }
  lower *= std::sqrt(scale);
  Vector x = std::sqrt(weight) * v;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lkk = lower(k, k);
    const double r = std::hypot(lkk, x(k));
    const double cs = r / lkk;
    const double sn = x(k) / lkk;
    lower(k, k) = r;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      lower(i, k) = (lower(i, k) + sn * x(i)) / cs;
      x(i) = cs * x(i) - sn * lower(i, k);
    }
  }
}

double min_eigenvalue(const SymmetricMatrix& c) {
  if (c.order() == 0) throw std::invalid_argument("min_eigenvalue: empty matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(c.dense(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace cmawm
