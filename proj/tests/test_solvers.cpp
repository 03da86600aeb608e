#include <doctest.h>

#include <cmath>
#include <random>

#include "benj/solvers.hpp"

using namespace benj::solvers;

namespace {

Matrix random_matrix(int n, unsigned seed, double diag_boost) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
    a(i, i) += diag_boost;
  }
  return a;
}

std::vector<double> random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(static_cast<size_t>(n));
  for (auto& x : v) x = dist(rng);
  return v;
}

// (A u)_n = (u_n + u_{n+1}) / 2, cyclic.
Matrix cyclic_averaging(int n) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 0.5;
    a(i, (i + 1) % n) = 0.5;
  }
  return a;
}

double inf_norm_matrix(const Matrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

}  // namespace

// ============================================================================
// lu_solve
// ============================================================================

TEST_CASE("identity and diagonal systems") {
  Matrix eye(3, 3);
  for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
  std::vector<double> b{1.0, -2.0, 3.5};
  auto x = lu_solve(eye, b);
  for (int i = 0; i < 3; ++i) CHECK(x[size_t(i)] == b[size_t(i)]);

  Matrix d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  auto y = lu_solve(d, {2.0, 8.0});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(2.0));
}

TEST_CASE("residual bound on random well-conditioned systems") {
  for (int n : {16, 128, 512, 2048}) {
    Matrix a = random_matrix(n, 100u + unsigned(n), 4.0);
    std::vector<double> b = random_vector(n, 200u + unsigned(n));
    auto x = lu_solve(a, b);
    std::vector<double> r(size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += a(i, j) * x[size_t(j)];
      r[size_t(i)] = s - b[size_t(i)];
    }
    double bound = 1e-10 * (inf_norm_matrix(a) * max_abs(x) + max_abs(b));
    CHECK(max_abs(r) <= bound);
  }
}

TEST_CASE("cyclic averaging matrix: singular for even n, solvable for odd n") {
  for (int n : {8, 64}) {
    CHECK_THROWS_AS(lu_solve(cyclic_averaging(n), std::vector<double>(size_t(n), 1.0)),
                    SingularMatrixError);
  }
  for (int n : {9, 63}) {
    auto x = lu_solve(cyclic_averaging(n), std::vector<double>(size_t(n), 1.0));
    for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
}

// ============================================================================
// newton_solve
// ============================================================================

TEST_CASE("linear residual converges in one iteration") {
  std::vector<double> target{2.0, -1.0, 0.5};
  auto residual = [&](const std::vector<double>& x) {
    std::vector<double> r(3);
    for (int i = 0; i < 3; ++i) r[size_t(i)] = x[size_t(i)] - target[size_t(i)];
    return r;
  };
  auto jacobian = [](const std::vector<double>&) {
    Matrix j(3, 3);
    for (int i = 0; i < 3; ++i) j(i, i) = 1.0;
    return j;
  };
  auto res = newton_solve(residual, jacobian, {10.0, 10.0, 10.0}, NewtonSettings{});
  CHECK(res.iterations == 1);
  for (int i = 0; i < 3; ++i) CHECK(res.x[size_t(i)] == doctest::Approx(target[size_t(i)]));
}

TEST_CASE("scalar quadratic from guess 3 reaches 2 within 1e-12 in <= 6 iterations") {
  auto residual = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0] - 4.0};
  };
  auto jacobian = [](const std::vector<double>& x) {
    Matrix j(1, 1);
    j(0, 0) = 2.0 * x[0];
    return j;
  };
  auto res = newton_solve(residual, jacobian, {3.0}, NewtonSettings{});
  CHECK(res.iterations <= 6);
  CHECK(std::abs(res.x[0] - 2.0) <= 1e-12);
}

TEST_CASE("rootless residual reports non-convergence with iteration count") {
  auto residual = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0] + 1.0};
  };
  auto jacobian = [](const std::vector<double>& x) {
    Matrix j(1, 1);
    j(0, 0) = 2.0 * x[0];
    return j;
  };
  NewtonSettings s;
  s.max_iter = 3;
  CHECK_THROWS_AS(newton_solve(residual, jacobian, {0.5}, s), NewtonError);
  try {
    newton_solve(residual, jacobian, {0.5}, s);
  } catch (const NewtonError& e) {
    CHECK(e.iterations == 3);
    CHECK(e.residual_norm > 0.0);
  }
}

TEST_CASE("finite-difference jacobian matches the analytic one") {
  auto residual = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0] + std::sin(x[1]), x[0] * x[1] - 1.5};
  };
  std::vector<double> at{0.7, -0.4};
  Matrix fd = finite_difference_jacobian(residual, at);
  CHECK(fd(0, 0) == doctest::Approx(2 * at[0]).epsilon(1e-8));
  CHECK(fd(0, 1) == doctest::Approx(std::cos(at[1])).epsilon(1e-8));
  CHECK(fd(1, 0) == doctest::Approx(at[1]).epsilon(1e-8));
  CHECK(fd(1, 1) == doctest::Approx(at[0]).epsilon(1e-8));
}

TEST_CASE("finite-difference jacobian mode solves the quadratic too") {
  auto residual = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0] - 4.0};
  };
  NewtonSettings s;
  s.jacobian_mode = JacobianMode::finite_difference;
  auto res = newton_solve(residual, nullptr, {3.0}, s);
  CHECK(std::abs(res.x[0] - 2.0) <= 1e-12);
}
