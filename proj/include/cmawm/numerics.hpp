#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cmawm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Standard normal CDF, computed through erfc so the lower tail keeps
/// relative precision.
double normal_cdf(double x);

/// Upper tail 1 - Phi(x), computed directly through erfc.
double normal_sf(double x);

/// Inverse of the standard normal CDF.
///
/// Rational approximation (Acklam) followed by one Halley step against the
/// erfc-based CDF. Absolute error of Phi(result) - p is below 1e-12 over the
/// full open interval. Throws std::domain_error for p outside (0, 1).
double normal_quantile(double p);

/// gamma-quantile of the chi-squared distribution with one degree of freedom.
/// Throws std::domain_error for gamma outside [0, 1).
double chi2_ppf_1dof(double gamma);

/// sqrt(N) * (1 - 1/(4N) + 1/(21 N^2)), the usual CMA-ES approximation of
/// E||N(0, I_N)||.
double expected_chi_norm(int n);

/// Raised when a matrix that must be positive definite is not.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Dense symmetric matrix. Every mutation re-symmetrizes by averaging with
/// the transpose, so entries (i, j) and (j, i) always compare equal.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Matrix m);

  static SymmetricMatrix identity(Eigen::Index n);
  static SymmetricMatrix diagonal(const Vector& d);

  Eigen::Index order() const noexcept { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Matrix& dense() const noexcept { return m_; }
  Vector diag() const { return m_.diagonal(); }

  void assign(Matrix m);

  // this <- scale * this + weight * v v^T
  void rank_one_update(double scale, double weight, const Vector& v);

 private:
  static void symmetrize(Matrix& m);

  Matrix m_;
};

/// Lower-triangular Cholesky factor L with L L^T = C. Sampling uses y = L xi;
/// the Cholesky convention is fixed so seeded runs reproduce.
Matrix factor_sqrt(const SymmetricMatrix& c);

/// Given lower-triangular L with L L^T = C, overwrites L with the Cholesky
/// factor of scale * C + weight * v v^T (scale > 0, weight >= 0) in O(N^2).
void cholesky_scaled_rank_one_update(Matrix& lower, double scale, double weight,
                                     const Vector& v);

double min_eigenvalue(const SymmetricMatrix& c);

}  // namespace cmawm
