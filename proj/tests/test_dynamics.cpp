#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "benj/dynamics.hpp"

using namespace benj;
using spectral::central_diff;
using spectral::DiffVariant;

namespace {

constexpr double kPi = std::numbers::pi;

Field random_field(const Grid& g, unsigned seed, bool mean_free = false) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field u(g);
  for (int i = 0; i < g.n; ++i) u[i] = dist(rng);
  if (mean_free) {
    double m = u.mean();
    for (int i = 0; i < g.n; ++i) u[i] -= m;
  }
  return u;
}

// Closed-form periodic BO solitary wave and its time derivative.
double soliton(double x, double t, double c, double l) {
  double a = 2 * kPi / (c * l);
  double r = std::sqrt(1 - a * a);
  return 2 * c * a * a / (1 - r * std::cos(c * a * (x - c * t - l / 2)));
}

double soliton_ut(double x, double t, double c, double l) {
  double a = 2 * kPi / (c * l);
  double r = std::sqrt(1 - a * a);
  double th = c * a * (x - c * t - l / 2);
  double denom = 1 - r * std::cos(th);
  return -2 * c * a * a * r * std::sin(th) / (denom * denom) * (-c * c * a);
}

}  // namespace

// ============================================================================
// Structure matrices
// ============================================================================

TEST_CASE("structure matrices are skew and carry beta") {
  Params p{0.3, -1.7, 0.9, 1.1};
  auto s = structure_matrices(p);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(s.m[i][j] == -s.m[j][i]);
      CHECK(s.k[i][j] == -s.k[j][i]);
    }
  CHECK(s.m[0][1] == 0.5);
  CHECK(s.k[0][3] == doctest::Approx(1.7));
  CHECK(s.k[1][2] == 1.0);
}

// ============================================================================
// grad_S
// ============================================================================

TEST_CASE("grad_S at zero state is zero") {
  Grid g = make_grid(10.0, 17);
  StateZ z(g);
  auto grad = grad_S(z, Params{2.0, 1.0, -0.5, 3.0});
  for (int c = 0; c < 4; ++c) CHECK(grad[size_t(c)].max_abs() == 0.0);
}

TEST_CASE("grad_S on constant u: L kills the constant") {
  Grid g = make_grid(10.0, 16);
  Params p{4.0, 0.0, 0.7, 1.3};
  StateZ z(g);
  double c0 = 0.6;
  for (int i = 0; i < g.n; ++i) z.u[i] = c0;
  auto grad = grad_S(z, p);
  double expect = -p.gamma * c0 - 0.5 * p.lambda * c0 * c0;
  for (int i = 0; i < g.n; ++i) CHECK(grad[0][i] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(grad[1].max_abs() == 0.0);
  for (int i = 0; i < g.n; ++i) CHECK(grad[2][i] == doctest::Approx(-c0));
}

TEST_CASE("grad_S component 0 matches independent nodewise assembly") {
  Grid g = make_grid(7.0, 24);
  Params p{1.4, -0.3, 0.25, 2.0};
  StateZ z(g);
  z.u = random_field(g, 1);
  z.phi = random_field(g, 2);
  z.w = random_field(g, 3);
  z.v = random_field(g, 4);
  auto grad = grad_S(z, p);
  Field lu = spectral::apply_L(z.u);
  for (int i = 0; i < g.n; ++i) {
    double expect = -z.w[i] - p.gamma * z.u[i] - 0.5 * p.lambda * z.u[i] * z.u[i] + p.alpha * lu[i];
    CHECK(grad[0][i] == doctest::Approx(expect).epsilon(1e-13));
    CHECK(grad[3][i] == doctest::Approx(p.beta * z.v[i]));
  }
}

// ============================================================================
// reduced_rhs
// ============================================================================

TEST_CASE("reduced_rhs vanishes on constants and telescopes to zero sum") {
  Grid g = make_grid(12.0, 31);
  Params p{0.8, -0.1, 0.5, 1.0};
  Field c(g);
  for (int i = 0; i < g.n; ++i) c[i] = 1.75;
  CHECK(reduced_rhs(c, p).max_abs() < 1e-12);

  Field u = random_field(g, 9);
  CHECK(std::abs(reduced_rhs(u, p).sum()) < 1e-11);
}

TEST_CASE("BO parameters reduce to -dx(u^2/2 - L u)") {
  Grid g = make_grid(30.0, 64);
  Params bo{1.0, 0.0, 0.0, 1.0};
  Field u = random_field(g, 21);
  Field expect(g);
  {
    Field lu = spectral::apply_L(u);
    Field flux(g);
    for (int i = 0; i < g.n; ++i) flux[i] = 0.5 * u[i] * u[i] - lu[i];
    Field d = central_diff(flux, DiffVariant::centered);
    for (int i = 0; i < g.n; ++i) expect[i] = -d[i];
  }
  Field got = reduced_rhs(u, bo);
  for (int i = 0; i < g.n; ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-11));
}

TEST_CASE("reduced_rhs approximates the soliton time derivative at second order") {
  double c = 0.25, l = 30.0;
  Params bo{1.0, 0.0, 0.0, 1.0};
  double err[2];
  int idx = 0;
  for (int n : {128, 256}) {
    Grid g = make_grid(l, n);
    Field u = Field::from_function(g, [&](double x) { return soliton(x, 0.0, c, l); });
    Field gt = reduced_rhs(u, bo);
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(gt[i] - soliton_ut(g.node(i), 0.0, c, l)));
    err[idx++] = e;
  }
  double order = std::log2(err[0] / err[1]);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

// ============================================================================
// linearize_rhs
// ============================================================================

TEST_CASE("linearized operator is zero on zero perturbations") {
  Grid g = make_grid(9.0, 18);
  Field u = random_field(g, 31);
  Field z(g);
  CHECK(linearize_rhs(u, Params{1.0, 0.5, 0.2, 1.5}).apply(z).max_abs() == 0.0);
}

TEST_CASE("linearize_rhs matches symmetric finite differences") {
  Grid g = make_grid(8.0, 22);
  std::vector<Params> cases = {{0.9, 0.0, 0.4, 0.0}, {1.2, -0.6, 0.1, 1.7}};
  for (const Params& p : cases) {
    Field u = (p.lambda == 0.0) ? Field(g) : random_field(g, 56);
    Field du = random_field(g, 57);
    Field got = linearize_rhs(u, p).apply(du);
    double eps = 1e-5;
    Field up(g), um(g);
    for (int i = 0; i < g.n; ++i) {
      up[i] = u[i] + eps * du[i];
      um[i] = u[i] - eps * du[i];
    }
    Field gp = reduced_rhs(up, p), gm = reduced_rhs(um, p);
    double dumax = du.max_abs();
    for (int i = 0; i < g.n; ++i) {
      double fd = (gp[i] - gm[i]) / (2 * eps);
      CHECK(std::abs(got[i] - fd) <= 1e-6 * dumax);
    }
  }
}

TEST_CASE("dense materialization matches matrix-free application") {
  Grid g = make_grid(5.0, 13);
  Field u = random_field(g, 77);
  Params p{0.7, 0.2, -0.3, 1.1};
  LinearOperator op = linearize_rhs(u, p);
  auto dense = op.to_dense();
  Field du = random_field(g, 78);
  Field direct = op.apply(du);
  for (int i = 0; i < g.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += dense[size_t(i) * g.n + j] * du[j];
    CHECK(s == doctest::Approx(direct[i]).epsilon(1e-12));
  }
}

// ============================================================================
// Lifts
// ============================================================================

TEST_CASE("lift_state of zero is zero and rejects even grids") {
  Grid g = make_grid(10.0, 25);
  Field z(g);
  StateZ s = lift_state(z, std::nullopt, std::nullopt, 0.1);
  CHECK(s.phi.max_abs() == 0.0);
  CHECK(s.w.max_abs() == 0.0);
  CHECK(s.v.max_abs() == 0.0);

  Grid ge = make_grid(10.0, 24);
  CHECK_THROWS_AS(lift_state(Field(ge), std::nullopt, std::nullopt, 0.1), std::invalid_argument);
}

TEST_CASE("lift_state inverts the centered difference on a single mode") {
  double l = 30.0;
  Grid g = make_grid(l, 255);
  Field u = Field::from_function(g, [&](double x) { return std::sin(2 * kPi * x / l); });
  StateZ s = lift_state(u, std::nullopt, std::nullopt, 0.1);
  // phi = -(l/2pi) cos(2 pi x / l) up to the O(dx^2) symbol of the centered
  // difference.
  Field expect =
      Field::from_function(g, [&](double x) { return -(l / (2 * kPi)) * std::cos(2 * kPi * x / l); });
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(s.phi[i] - expect[i]) < 2e-3);
  // Defining relation holds to round-off.
  Field back = central_diff(s.phi, DiffVariant::centered);
  for (int i = 0; i < g.n; ++i) CHECK(back[i] == doctest::Approx(u[i] - u.mean()).epsilon(1e-9));
  CHECK(std::abs(s.phi.mean()) < 1e-13);
}

TEST_CASE("lift_state w uses the centered time difference") {
  Grid g = make_grid(30.0, 63);
  Field u = random_field(g, 3, true);
  Field up = random_field(g, 4, true);
  Field un = random_field(g, 5, true);
  double dt = 0.05;
  StateZ s = lift_state(u, up, un, dt);
  Field dxw = central_diff(s.w, DiffVariant::centered);
  double rhs_mean = 0.5 * (un.mean() - up.mean()) / (2 * dt);
  for (int i = 0; i < g.n; ++i) {
    double dtu = 0.5 * (un[i] - up[i]) / (2 * dt);
    CHECK(dxw[i] == doctest::Approx(dtu - rhs_mean).epsilon(1e-8));
  }
}

TEST_CASE("lift_state_box satisfies the forward-averaged constraints") {
  Grid g = make_grid(30.0, 63);
  Field u = random_field(g, 8);
  Field ut = random_field(g, 9, true);
  for (double beta : {0.0, -1.0}) {
    StateZ s = lift_state_box(u, ut, beta);
    Field dxp_phi = central_diff(s.phi, DiffVariant::plus);
    Field dxp_w = central_diff(s.w, DiffVariant::plus);
    for (int i = 0; i < g.n; ++i) {
      int ip = (i + 1) % g.n;
      double axu = 0.5 * ((u[i] - u.mean()) + (u[ip] - u.mean()));
      CHECK(dxp_phi[i] == doctest::Approx(axu).epsilon(1e-8));
      double axut = 0.25 * (ut[i] + ut[ip]);
      CHECK(dxp_w[i] == doctest::Approx(axut).epsilon(1e-8));
      if (beta != 0.0) {
        double axv = 0.5 * (s.v[i] + s.v[ip]);
        CHECK(axv == doctest::Approx((u[ip] - u[i]) / g.dx).epsilon(1e-8));
      }
    }
  }
}

// ============================================================================
// Limiting forms
// ============================================================================

TEST_CASE("beta = gamma = 0 is the BO field; alpha = gamma = 0 is the KdV field") {
  Grid g = make_grid(20.0, 40);
  Field u = random_field(g, 99);
  {
    Params bo{1.3, 0.0, 0.0, 0.9};
    Field got = reduced_rhs(u, bo);
    Field flux(g);
    Field lu = spectral::apply_L(u);
    for (int i = 0; i < g.n; ++i) flux[i] = 0.5 * bo.lambda * u[i] * u[i] - bo.alpha * lu[i];
    Field d = central_diff(flux, DiffVariant::centered);
    for (int i = 0; i < g.n; ++i) CHECK(got[i] == doctest::Approx(-d[i]).epsilon(1e-11));
  }
  {
    Params kdv{0.0, 0.4, 0.0, 0.9};
    Field got = reduced_rhs(u, kdv);
    Field flux(g);
    for (int i = 0; i < g.n; ++i) flux[i] = 0.5 * kdv.lambda * u[i] * u[i];
    Field d = central_diff(flux, DiffVariant::centered);
    Field d3 = central_diff(
        central_diff(central_diff(u, DiffVariant::centered), DiffVariant::centered),
        DiffVariant::centered);
    for (int i = 0; i < g.n; ++i)
      CHECK(got[i] == doctest::Approx(-d[i] + kdv.beta * d3[i]).epsilon(1e-11));
  }
}
