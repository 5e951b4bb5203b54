#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cmawm/numerics.hpp"
#include "oracles.hpp"

using namespace cmawm;

TEST_CASE("normal_quantile known values") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.75) == doctest::Approx(0.6744897502).epsilon(1e-10));
  CHECK(normal_quantile(0.9) == doctest::Approx(1.2815515655).epsilon(1e-10));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963985).epsilon(1e-9));
  CHECK(normal_quantile(1e-300) < -37.0);
}

TEST_CASE("normal_quantile is antisymmetric and inverts the cdf") {
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-12));
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-13);
  }
}

TEST_CASE("normal_quantile rejects probabilities outside (0, 1)") {
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(-0.1), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), std::domain_error);
}

TEST_CASE("normal tails") {
  CHECK(normal_cdf(-0.5) == doctest::Approx(0.30853754).epsilon(1e-8));
  CHECK(normal_cdf(0.0) == 0.5);
  // The upper tail keeps relative precision where 1 - cdf would be zero.
  CHECK(normal_sf(10.0) > 0.0);
  CHECK(normal_sf(10.0) == doctest::Approx(7.6198530241605e-24).epsilon(1e-10));
  CHECK(normal_cdf(-10.0) == doctest::Approx(normal_sf(10.0)).epsilon(1e-14));
}

TEST_CASE("chi2_ppf_1dof") {
  CHECK(chi2_ppf_1dof(0.0) == 0.0);
  CHECK(chi2_ppf_1dof(0.5) == doctest::Approx(0.454936423).epsilon(1e-9));
  CHECK(chi2_ppf_1dof(0.8) == doctest::Approx(1.642374415).epsilon(1e-9));
  CHECK(chi2_ppf_1dof(0.95) == doctest::Approx(3.841458821).epsilon(1e-9));
  CHECK_THROWS_AS(chi2_ppf_1dof(1.0), std::domain_error);
  CHECK_THROWS_AS(chi2_ppf_1dof(-0.01), std::domain_error);
}

TEST_CASE("special functions agree with bisection oracles on a grid") {
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    CHECK(std::abs(normal_quantile(p) - oracle::normal_quantile(p)) < 1e-8);
    CHECK(std::abs(chi2_ppf_1dof(p) - oracle::chi2_ppf_1dof(p)) < 1e-8);
  }
}

TEST_CASE("expected_chi_norm") {
  CHECK(expected_chi_norm(1) == doctest::Approx(0.797619048).epsilon(1e-9));
  CHECK(expected_chi_norm(4) == doctest::Approx(1.880952381).epsilon(1e-9));
  CHECK(expected_chi_norm(100) == doctest::Approx(9.97504762).epsilon(1e-9));
  CHECK_THROWS(expected_chi_norm(0));
}

TEST_CASE("SymmetricMatrix keeps exact symmetry") {
  Matrix m(2, 2);
  m << 2.0, 1.0, 0.0, 3.0;
  SymmetricMatrix s(m);
  CHECK(s(0, 1) == 0.5);
  CHECK(s(1, 0) == 0.5);
  Vector v(2);
  v << 0.1, 0.3;
  s.rank_one_update(0.9, 0.2, v);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 0) == doctest::Approx(0.9 * 2.0 + 0.2 * 0.01));
  CHECK_THROWS_AS(s.rank_one_update(1.0, 1.0, Vector::Ones(3)), std::invalid_argument);
  CHECK_THROWS_AS(SymmetricMatrix(Matrix::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("factor_sqrt returns a lower factor and reports indefinite input") {
  Matrix m(3, 3);
  m << 4, 2, 0.4, 2, 5, 1, 0.4, 1, 3;
  SymmetricMatrix c(m);
  const Matrix l = factor_sqrt(c);
  CHECK((l * l.transpose() - m).norm() < 1e-12);
  CHECK(l(0, 1) == 0.0);
  CHECK(l(0, 2) == 0.0);

  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;
  try {
    factor_sqrt(SymmetricMatrix(bad));
    FAIL("expected FactorizationError");
  } catch (const FactorizationError& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-1.0));
  }
}

TEST_CASE("incremental Cholesky update matches refactorization") {
  oracle::Lcg g(7);
  const int n = 6;
  SymmetricMatrix c = SymmetricMatrix::identity(n);
  Matrix l = Matrix::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = g.normal();
    const double scale = g.uniform(0.8, 1.0);
    const double weight = g.uniform(0.0, 0.3);
    c.rank_one_update(scale, weight, v);
    cholesky_scaled_rank_one_update(l, scale, weight, v);
  }
  CHECK((l - factor_sqrt(c)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(cholesky_scaled_rank_one_update(l, 0.0, 1.0, Vector::Ones(n)),
                  std::domain_error);
}

TEST_CASE("min_eigenvalue") {
  CHECK(min_eigenvalue(SymmetricMatrix::diagonal(Vector::LinSpaced(4, 0.5, 2.0))) ==
        doctest::Approx(0.5));
}
