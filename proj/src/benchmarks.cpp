#include "cmawm/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace cmawm {

Problem::Problem(std::string name, SearchSpace space, Sense sense, Function f)
    : name_(std::move(name)), space_(std::move(space)), sense_(sense), f_(std::move(f)) {}

bool Problem::reached(const FeasiblePoint& x, const Fitness& value, double target) const {
  if (sense_ == Sense::kMinimize) return value.value() <= target;
  for (int j = space_.n_continuous(); j < space_.dimension(); ++j) {
    if (x.values(j) != 1.0) return false;
  }
  return true;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{
      "sphere-one-max", "sphere-leading-ones", "ellipsoid-one-max", "ellipsoid-leading-ones",
      "sphere-int",     "ellipsoid-int",       "one-max",           "leading-ones",
      "bin-val"};
  return names;
}

double one_max(std::span<const double> bits) {
  double sum = 0.0;
  for (double b : bits) sum += b;
  return sum;
}

double leading_ones(std::span<const double> bits) {
  double count = 0.0;
  for (double b : bits) {
    if (b != 1.0) break;
    count += 1.0;
  }
  return count;
}

Fitness bin_val(std::span<const double> bits) {
  constexpr std::size_t kMantissa = 53;
  const std::size_t n = bits.size();
  Fitness key{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    if (bits[j] == 0.0) continue;
    const double weight = std::ldexp(1.0, static_cast<int>(n - 1 - j));
    (j < kMantissa ? key.primary : key.refinement) += weight;
  }
  return key;
}

namespace {

enum class BinaryPart { kOneMax, kLeadingOnes };

std::vector<double> ellipsoid_scales(int count) {
  std::vector<double> scale(count, 1.0);
  for (int j = 0; j < count; ++j) scale[j] = std::pow(1000.0, double(j) / double(count - 1));
  return scale;
}

Problem mixed_binary(std::string name, int n, std::optional<int> n_co, bool ellipsoid,
                     BinaryPart part) {
  int co = 0;
  if (n_co) {
    co = *n_co;
  } else {
    if (n % 2 != 0) throw std::invalid_argument(name + ": N must be even for the N/2 split");
    co = n / 2;
  }
  if (co < 1 || co >= n) throw std::invalid_argument(name + ": need 1 <= N_co < N");
  if (ellipsoid && co < 2) throw std::invalid_argument(name + ": ellipsoid needs N_co >= 2");
  const int n_bi = n - co;
  std::vector<double> scale = ellipsoid ? ellipsoid_scales(co) : std::vector<double>(co, 1.0);
  SearchSpace space(co, std::vector<std::vector<double>>(n_bi, SearchSpace::binary()));
  auto f = [co, n_bi, scale, part](const FeasiblePoint& x) -> Fitness {
    double cont = 0.0;
    for (int j = 0; j < co; ++j) {
      const double t = scale[j] * x.values(j);
      cont += t * t;
    }
    const std::span<const double> bits(x.values.data() + co, n_bi);
    const double bin = part == BinaryPart::kOneMax ? one_max(bits) : leading_ones(bits);
    return cont + (n_bi - bin);
  };
  return Problem(std::move(name), std::move(space), Sense::kMinimize, std::move(f));
}

Problem integer_problem(std::string name, int n, std::optional<int> n_co, bool ellipsoid) {
  const int co = n_co.value_or(0);
  if (co < 0 || co >= n) throw std::invalid_argument(name + ": need 0 <= N_co < N");
  if (ellipsoid && n < 2) throw std::invalid_argument(name + ": ellipsoid needs N >= 2");
  std::vector<double> scale = ellipsoid ? ellipsoid_scales(n) : std::vector<double>(n, 1.0);
  SearchSpace space(co, std::vector<std::vector<double>>(n - co, SearchSpace::integer_range(-10, 10)));
  auto f = [n, scale](const FeasiblePoint& x) -> Fitness {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = scale[j] * x.values(j);
      sum += t * t;
    }
    return sum;
  };
  return Problem(std::move(name), std::move(space), Sense::kMinimize, std::move(f));
}

Problem binary_problem(std::string name, int n, std::optional<int> n_co) {
  if (n_co && *n_co != 0) throw std::invalid_argument(name + ": binary problems have N_co = 0");
  SearchSpace space(0, std::vector<std::vector<double>>(n, SearchSpace::binary()));
  Problem::Function f;
  if (name == "one-max") {
    f = [](const FeasiblePoint& x) -> Fitness { return one_max({x.values.data(), size_t(x.values.size())}); };
  } else if (name == "leading-ones") {
    f = [](const FeasiblePoint& x) -> Fitness { return leading_ones({x.values.data(), size_t(x.values.size())}); };
  } else {
    f = [](const FeasiblePoint& x) { return bin_val({x.values.data(), size_t(x.values.size())}); };
  }
  return Problem(std::move(name), std::move(space), Sense::kMaximize, std::move(f));
}

}  // namespace

Problem make_problem(std::string_view name, int n, std::optional<int> n_co) {
  if (n < 1) throw std::invalid_argument("make_problem: N must be >= 1");
  const std::string key(name);
  if (key == "sphere-one-max") return mixed_binary(key, n, n_co, false, BinaryPart::kOneMax);
  if (key == "sphere-leading-ones") return mixed_binary(key, n, n_co, false, BinaryPart::kLeadingOnes);
  if (key == "ellipsoid-one-max") return mixed_binary(key, n, n_co, true, BinaryPart::kOneMax);
  if (key == "ellipsoid-leading-ones") return mixed_binary(key, n, n_co, true, BinaryPart::kLeadingOnes);
  if (key == "sphere-int") return integer_problem(key, n, n_co, false);
  if (key == "ellipsoid-int") return integer_problem(key, n, n_co, true);
  if (key == "one-max" || key == "leading-ones" || key == "bin-val") return binary_problem(key, n, n_co);
  throw std::invalid_argument("make_problem: unknown problem '" + key + "'");
}

}  // namespace cmawm
