#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmawm/space.hpp"
#include "oracles.hpp"

using namespace cmawm;

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(SearchSpace(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(SearchSpace(0, {{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SearchSpace(0, {{0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SearchSpace(0, {{1.0, 0.0}}), std::invalid_argument);
  CHECK_NOTHROW(SearchSpace(3, {}));
  CHECK(SearchSpace::integer_range(-2, 2) == std::vector<double>{-2, -1, 0, 1, 2});
}

TEST_CASE("layout queries") {
  SearchSpace s(2, {SearchSpace::binary(), SearchSpace::integer_range(0, 3)});
  CHECK(s.dimension() == 4);
  CHECK(s.n_continuous() == 2);
  CHECK(s.n_discrete() == 2);
  CHECK_FALSE(s.is_discrete(1));
  CHECK(s.is_discrete(2));
  CHECK_FALSE(s.fully_discrete());
  CHECK_FALSE(s.all_discrete_binary());
  CHECK(s.has_discrete());
  CHECK(s.midpoints(3).size() == 3);
  CHECK(s.midpoints(3)[0] == 0.5);
  CHECK_THROWS_AS(s.values(0), std::logic_error);
  CHECK(SearchSpace(0, {SearchSpace::binary()}).all_discrete_binary());
}

TEST_CASE("encoding thresholds") {
  SearchSpace s(0, {SearchSpace::binary(), SearchSpace::integer_range(-10, 10)});
  CHECK(s.encode_coordinate(0, 0.5) == 0.0);  // exactly on the midpoint goes low
  CHECK(s.encode_coordinate(0, 0.5000001) == 1.0);
  CHECK(s.encode_coordinate(0, -7.0) == 0.0);
  CHECK(s.encode_coordinate(0, 9.0) == 1.0);
  CHECK(s.encode_coordinate(1, 2.5) == 2.0);
  CHECK(s.encode_coordinate(1, 2.51) == 3.0);
  CHECK(s.encode_coordinate(1, -2.5) == -3.0);
  CHECK(s.encode_coordinate(1, 100.0) == 10.0);
  CHECK(s.encode_coordinate(1, -100.0) == -10.0);
  CHECK_THROWS_AS(s.encode(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("encode leaves continuous coordinates alone and is idempotent") {
  oracle::Lcg g(3);
  SearchSpace s(2, {SearchSpace::binary(), SearchSpace::integer_range(-5, 5), {0.0, 0.3, 2.0}});
  for (int it = 0; it < 500; ++it) {
    Vector v(5);
    for (int i = 0; i < 5; ++i) v(i) = g.uniform(-8.0, 8.0);
    const FeasiblePoint p = s.encode(v);
    CHECK(p.values(0) == v(0));
    CHECK(p.values(1) == v(1));
    CHECK(s.encode(p.values).values == p.values);
    for (int j = 2; j < 5; ++j) {
      // Nearest admissible value.
      double best = 1e300;
      for (double z : s.values(j)) best = std::min(best, std::abs(z - v(j)));
      CHECK(std::abs(p.values(j) - v(j)) == doctest::Approx(best));
    }
  }
}

TEST_CASE("edge, midpoints and brackets") {
  SearchSpace s(0, {SearchSpace::integer_range(0, 3)});
  CHECK(s.is_edge(0, 0.2));
  CHECK(s.is_edge(0, 3.0));
  CHECK_FALSE(s.is_edge(0, 1.0));
  CHECK(s.nearest_midpoint(0, 1.0) == 0.5);  // equidistant: low
  CHECK(s.nearest_midpoint(0, 1.2) == 1.5);
  CHECK(s.nearest_midpoint(0, -4.0) == 0.5);
  const auto [lo, up] = s.bracketing_midpoints(0, 1.2);
  CHECK(lo == 0.5);
  CHECK(up == 1.5);
  CHECK_THROWS_AS(s.bracketing_midpoints(0, 0.0), std::logic_error);
}

TEST_CASE("even spacing") {
  SearchSpace s(0, {SearchSpace::integer_range(-3, 3), {0.0, 0.3, 2.0}});
  CHECK(s.is_evenly_spaced(0));
  CHECK_FALSE(s.is_evenly_spaced(1));
}
