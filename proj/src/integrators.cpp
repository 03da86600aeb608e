#include "benj/integrators.hpp"

#include <cmath>
#include <stdexcept>

namespace benj::integrators {

using spectral::central_diff;
using spectral::DiffVariant;
using solvers::Matrix;

Field heun_step(const Field& u, const Params& p, double dt) {
  Field g1 = reduced_rhs(u, p);
  Field predictor(u.grid);
  for (int i = 0; i < u.size(); ++i) predictor[i] = u[i] + dt * g1[i];
  Field g2 = reduced_rhs(predictor, p);
  Field out(u.grid);
  for (int i = 0; i < u.size(); ++i) out[i] = u[i] + 0.5 * dt * (g1[i] + g2[i]);
  return out;
}

Field rk4_step(const Field& u, const Params& p, double dt) {
  auto shift = [&](const Field& base, const Field& k, double s) {
    Field r(base.grid);
    for (int i = 0; i < base.size(); ++i) r[i] = base[i] + s * k[i];
    return r;
  };
  Field k1 = reduced_rhs(u, p);
  Field k2 = reduced_rhs(shift(u, k1, 0.5 * dt), p);
  Field k3 = reduced_rhs(shift(u, k2, 0.5 * dt), p);
  Field k4 = reduced_rhs(shift(u, k3, dt), p);
  Field out(u.grid);
  for (int i = 0; i < u.size(); ++i)
    out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

std::pair<Field, Field> euler_box_start(const Field& u0, const Params& p, double dt) {
  return {u0, heun_step(u0, p, dt)};
}

Field euler_box_step(const Field& u_prev, const Field& u_curr, const Params& p, double dt) {
  check_same_grid(u_prev, u_curr, "euler_box_step");
  Field g = reduced_rhs(u_curr, p);
  Field out(u_curr.grid);
  for (int i = 0; i < u_curr.size(); ++i) out[i] = u_prev[i] + 2.0 * dt * g[i];
  return out;
}

// ---------------------------------------------------------------------------
// Preissmann box
// ---------------------------------------------------------------------------

namespace {

int wrap(int i, int n) { return (i + 1 == n) ? 0 : i + 1; }

// Forward spatial average at midpoints: (x_n + x_{n+1}) / 2.
std::vector<double> average_forward(const std::vector<double>& x, int n, int offset) {
  std::vector<double> r(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    r[static_cast<size_t>(i)] =
        0.5 * (x[static_cast<size_t>(offset + i)] + x[static_cast<size_t>(offset + wrap(i, n))]);
  return r;
}

std::vector<double> flatten(const StateZ& z) {
  int n = z.u.size();
  std::vector<double> out(static_cast<size_t>(4 * n));
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < n; ++i)
      out[static_cast<size_t>(c * n + i)] = z.component(c)[i];
  return out;
}

StateZ unflatten(const std::vector<double>& x, const Grid& g) {
  StateZ z(g);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < g.n; ++i)
      z.component(c)[i] = x[static_cast<size_t>(c * g.n + i)];
  return z;
}

std::vector<double> dense_from_operator(const Grid& g, const std::function<Field(const Field&)>& op) {
  int n = g.n;
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  Field e(g);
  for (int j = 0; j < n; ++j) {
    e.values.assign(static_cast<size_t>(n), 0.0);
    e[j] = 1.0;
    Field col = op(e);
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + j] = col[i];
  }
  return a;
}

// Residual of the box system evaluated on flat [u|phi|w|v] next-level data.
std::vector<double> box_residual(const std::vector<double>& zn, const StateZ& z_curr,
                                 const Params& p, double dt) {
  const Grid& g = z_curr.u.grid;
  int n = g.n;
  StructureMatrices s = structure_matrices(p);

  // Time-midpoint state and forward time difference, componentwise.
  std::vector<double> zh(static_cast<size_t>(4 * n)), zt(static_cast<size_t>(4 * n));
  for (int c = 0; c < 4; ++c) {
    const Field& cur = z_curr.component(c);
    for (int i = 0; i < n; ++i) {
      double nx = zn[static_cast<size_t>(c * n + i)];
      zh[static_cast<size_t>(c * n + i)] = 0.5 * (nx + cur[i]);
      zt[static_cast<size_t>(c * n + i)] = (nx - cur[i]) / dt;
    }
  }

  // grad_S at the space-time midpoint, with L applied to the full averaged u.
  Field ubar(g), wbar(g), vbar(g);
  {
    auto ub = average_forward(zh, n, 0);
    auto wb = average_forward(zh, n, 2 * n);
    auto vb = average_forward(zh, n, 3 * n);
    for (int i = 0; i < n; ++i) {
      ubar[i] = ub[static_cast<size_t>(i)];
      wbar[i] = wb[static_cast<size_t>(i)];
      vbar[i] = vb[static_cast<size_t>(i)];
    }
  }
  Field lubar = spectral::apply_L(ubar);
  double ubar_mean = ubar.mean();

  std::vector<double> r(static_cast<size_t>(4 * n), 0.0);
  for (int i = 0; i < n; ++i) {
    int ip = wrap(i, n);
    // M dt+ z_{n+1/2}
    double mterm[4];
    for (int c1 = 0; c1 < 4; ++c1) {
      double acc = 0.0;
      for (int c2 = 0; c2 < 4; ++c2) {
        double m = s.m[c1][c2];
        if (m != 0.0)
          acc += m * 0.5 * (zt[static_cast<size_t>(c2 * n + i)] + zt[static_cast<size_t>(c2 * n + ip)]);
      }
      mterm[c1] = acc;
    }
    // K dx+ z^{i+1/2}
    double kterm[4];
    for (int c1 = 0; c1 < 4; ++c1) {
      double acc = 0.0;
      for (int c2 = 0; c2 < 4; ++c2) {
        double k = s.k[c1][c2];
        if (k != 0.0)
          acc += k * (zh[static_cast<size_t>(c2 * n + ip)] - zh[static_cast<size_t>(c2 * n + i)]) / g.dx;
      }
      kterm[c1] = acc;
    }
    double u = ubar[i];
    double grad0 = -wbar[i] - p.gamma * u - 0.5 * p.lambda * u * u + p.alpha * lubar[i];
    double grad2 = -(u - ubar_mean);
    double grad3 = p.beta * vbar[i];
    r[static_cast<size_t>(0 * n + i)] = mterm[0] + kterm[0] - grad0;
    r[static_cast<size_t>(1 * n + i)] = mterm[1] + kterm[1];
    r[static_cast<size_t>(2 * n + i)] = mterm[2] + kterm[2] - grad2;
    r[static_cast<size_t>(3 * n + i)] = mterm[3] + kterm[3] - grad3;
  }
  return r;
}

}  // namespace

std::vector<double> preissmann_residual(const StateZ& z_next, const StateZ& z_curr,
                                        const Params& p, double dt) {
  check_same_grid(z_next.u, z_curr.u, "preissmann_residual");
  if (z_curr.u.grid.parity != Parity::odd)
    throw std::invalid_argument("preissmann_residual: odd grid required for unique solvability");
  return box_residual(flatten(z_next), z_curr, p, dt);
}

PreissmannStepper::PreissmannStepper(const Grid& grid, const Params& p, double dt,
                                     solvers::NewtonSettings settings)
    : grid_(grid), p_(p), dt_(dt), settings_(settings) {
  if (grid.parity != Parity::odd)
    throw std::invalid_argument("preissmann: odd grid required for unique solvability");
  l_dense_ = dense_from_operator(grid, [](const Field& e) { return spectral::apply_L(e); });
  // L * A_x with A_x the forward averaging stencil.
  int n = grid.n;
  l_ax_dense_.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int jm = (j == 0) ? n - 1 : j - 1;
      l_ax_dense_[static_cast<size_t>(i) * n + j] =
          0.5 * (l_dense_[static_cast<size_t>(i) * n + j] + l_dense_[static_cast<size_t>(i) * n + jm]);
    }
}

std::vector<double> PreissmannStepper::pinned_residual(const std::vector<double>& zn,
                                                       const StateZ& z_curr) const {
  int n = grid_.n;
  std::vector<double> r = box_residual(zn, z_curr, p_, dt_);
  // Zero-mean gauge on w replaces the one redundant constraint row.
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) wsum += zn[static_cast<size_t>(2 * n + i)];
  r[static_cast<size_t>(2 * n)] = wsum;
  if (p_.beta == 0.0) {
    // v decouples; pin it to the centered derivative of u.
    for (int i = 0; i < n; ++i) {
      int ip = wrap(i, n);
      int im = (i == 0) ? n - 1 : i - 1;
      double dcu = (zn[static_cast<size_t>(ip)] - zn[static_cast<size_t>(im)]) / (2.0 * grid_.dx);
      r[static_cast<size_t>(3 * n + i)] = zn[static_cast<size_t>(3 * n + i)] - dcu;
    }
  }
  return r;
}

Matrix PreissmannStepper::pinned_jacobian(const std::vector<double>& zn,
                                          const StateZ& z_curr) const {
  const int n = grid_.n;
  StructureMatrices s = structure_matrices(p_);
  Matrix j(4 * n, 4 * n);

  // d z^{i+1/2} / d z^{i+1} = 1/2 throughout.
  for (int i = 0; i < n; ++i) {
    int ip = wrap(i, n);
    for (int c1 = 0; c1 < 4; ++c1)
      for (int c2 = 0; c2 < 4; ++c2) {
        double m = s.m[c1][c2];
        if (m != 0.0) {
          j(c1 * n + i, c2 * n + i) += m * 0.5 / dt_;
          j(c1 * n + i, c2 * n + ip) += m * 0.5 / dt_;
        }
        double k = s.k[c1][c2];
        if (k != 0.0) {
          j(c1 * n + i, c2 * n + ip) += 0.5 * k / grid_.dx;
          j(c1 * n + i, c2 * n + i) -= 0.5 * k / grid_.dx;
        }
      }
  }

  // -d grad_S / d z^{i+1}: local terms through the averaging stencil and the
  // dense alpha L A_x block in the (u, u) position.
  std::vector<double> ubar(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    int ip = wrap(i, n);
    double uh_i = 0.5 * (zn[static_cast<size_t>(i)] + z_curr.u[i]);
    double uh_p = 0.5 * (zn[static_cast<size_t>(ip)] + z_curr.u[ip]);
    ubar[static_cast<size_t>(i)] = 0.5 * (uh_i + uh_p);
  }
  for (int i = 0; i < n; ++i) {
    int ip = wrap(i, n);
    double coeff = 0.25 * (p_.gamma + p_.lambda * ubar[static_cast<size_t>(i)]);
    j(0 * n + i, 0 * n + i) += coeff;
    j(0 * n + i, 0 * n + ip) += coeff;
    // -grad0 contributes +wbar: quarter weight on each of the four entries.
    j(0 * n + i, 2 * n + i) += 0.25;
    j(0 * n + i, 2 * n + ip) += 0.25;
    // -grad2 = +(ubar - mean): stencil part.
    j(2 * n + i, 0 * n + i) += 0.25;
    j(2 * n + i, 0 * n + ip) += 0.25;
    // -grad3 = -beta vbar.
    j(3 * n + i, 3 * n + i) -= 0.25 * p_.beta;
    j(3 * n + i, 3 * n + ip) -= 0.25 * p_.beta;
  }
  // Dense block: l_ax already carries the averaging half, the extra 1/2 is
  // the time midpoint.
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c)
      j(0 * n + i, 0 * n + c) -= 0.5 * p_.alpha * l_ax_dense_[static_cast<size_t>(i) * n + c];
  // Mean correction of the constraint row: subtract the column means of the
  // (2,0) block; A_x columns each sum to one, so the correction is flat.
  double flat = 0.5 / static_cast<double>(n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) j(2 * n + i, 0 * n + c) -= flat;

  // Gauge row and inert-v rows.
  for (int c = 0; c < 4 * n; ++c) j(2 * n, c) = 0.0;
  for (int i = 0; i < n; ++i) j(2 * n, 2 * n + i) = 1.0;
  if (p_.beta == 0.0) {
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 4 * n; ++c) j(3 * n + i, c) = 0.0;
      int ip = wrap(i, n);
      int im = (i == 0) ? n - 1 : i - 1;
      j(3 * n + i, 3 * n + i) = 1.0;
      j(3 * n + i, 0 * n + ip) -= 1.0 / (2.0 * grid_.dx);
      j(3 * n + i, 0 * n + im) += 1.0 / (2.0 * grid_.dx);
    }
  }
  return j;
}

PreissmannResult PreissmannStepper::step(const StateZ& z_curr) const {
  if (!(z_curr.u.grid == grid_))
    throw std::invalid_argument("preissmann_step: grid mismatch");
  auto residual = [&](const std::vector<double>& x) { return pinned_residual(x, z_curr); };
  auto jacobian = [&](const std::vector<double>& x) { return pinned_jacobian(x, z_curr); };
  solvers::NewtonResult res =
      solvers::newton_solve(residual, jacobian, flatten(z_curr), settings_);
  return PreissmannResult{unflatten(res.x, grid_), res.iterations};
}

PreissmannResult preissmann_step(const StateZ& z_curr, const Params& p, double dt,
                                 const solvers::NewtonSettings& settings) {
  PreissmannStepper stepper(z_curr.u.grid, p, dt, settings);
  return stepper.step(z_curr);
}

// ---------------------------------------------------------------------------
// Thomee-Vasudeva Murthy
// ---------------------------------------------------------------------------

TvmStepper::TvmStepper(const Grid& grid, double dt, solvers::NewtonSettings settings)
    : grid_(grid), dt_(dt), settings_(settings) {
  if (grid.parity != Parity::even)
    throw std::invalid_argument("tvm: even grid required (even-interval Hilbert kernel)");
  // Dense H dx+ dx-: second difference then the kernel convolution.
  hd2_ = dense_from_operator(grid, [&](const Field& e) {
    Field d2 = central_diff(central_diff(e, DiffVariant::plus), DiffVariant::minus);
    return spectral::hilbert_fft(d2);
  });
}

namespace {

// f(u)_n = (u_{n+1} + u_n + u_{n-1})(u_{n+1} - u_{n-1}) / (6 dx)
std::vector<double> tvm_f(const std::vector<double>& u, int n, double dx) {
  std::vector<double> r(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1 == n) ? 0 : i + 1;
    int im = (i == 0) ? n - 1 : i - 1;
    r[static_cast<size_t>(i)] = (u[static_cast<size_t>(ip)] + u[static_cast<size_t>(i)] +
                                 u[static_cast<size_t>(im)]) *
                                (u[static_cast<size_t>(ip)] - u[static_cast<size_t>(im)]) /
                                (6.0 * dx);
  }
  return r;
}

}  // namespace

std::pair<Field, int> TvmStepper::step_with_count(const Field& u, const Field* prev_hint) const {
  if (!(u.grid == grid_)) throw std::invalid_argument("tvm_step: grid mismatch");
  const int n = grid_.n;
  const double dx = grid_.dx;

  auto residual = [&](const std::vector<double>& x) {
    std::vector<double> mid(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) mid[static_cast<size_t>(i)] = 0.5 * (x[static_cast<size_t>(i)] + u[i]);
    std::vector<double> f = tvm_f(mid, n, dx);
    std::vector<double> r(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      double conv = 0.0;
      const double* row = hd2_.data() + static_cast<size_t>(i) * n;
      for (int c = 0; c < n; ++c) conv += row[c] * mid[static_cast<size_t>(c)];
      r[static_cast<size_t>(i)] =
          (x[static_cast<size_t>(i)] - u[i]) / dt_ + f[static_cast<size_t>(i)] - conv;
    }
    return r;
  };
  auto jacobian = [&](const std::vector<double>& x) {
    Matrix j(n, n);
    std::vector<double> mid(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) mid[static_cast<size_t>(i)] = 0.5 * (x[static_cast<size_t>(i)] + u[i]);
    for (int i = 0; i < n; ++i) {
      const double* row = hd2_.data() + static_cast<size_t>(i) * n;
      for (int c = 0; c < n; ++c) j(i, c) = -0.5 * row[c];
      int ip = (i + 1 == n) ? 0 : i + 1;
      int im = (i == 0) ? n - 1 : i - 1;
      double a = mid[static_cast<size_t>(ip)] + mid[static_cast<size_t>(i)] + mid[static_cast<size_t>(im)];
      double b = mid[static_cast<size_t>(ip)] - mid[static_cast<size_t>(im)];
      j(i, i) += 1.0 / dt_ + 0.5 * b / (6.0 * dx);
      j(i, ip) += 0.5 * (a + b) / (6.0 * dx);
      j(i, im) += 0.5 * (b - a) / (6.0 * dx);
    }
    return j;
  };

  std::vector<double> guess(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    guess[static_cast<size_t>(i)] = prev_hint ? 2.0 * u[i] - (*prev_hint)[i] : u[i];
  solvers::NewtonResult res = solvers::newton_solve(residual, jacobian, std::move(guess), settings_);
  Field out(grid_);
  for (int i = 0; i < n; ++i) out[i] = res.x[static_cast<size_t>(i)];
  return {out, res.iterations};
}

Field TvmStepper::step(const Field& u, const Field* prev_hint) const {
  return step_with_count(u, prev_hint).first;
}

Field tvm_step(const Field& u, double dt, const solvers::NewtonSettings& settings) {
  TvmStepper stepper(u.grid, dt, settings);
  return stepper.step(u);
}

// ---------------------------------------------------------------------------
// StepperState
// ---------------------------------------------------------------------------

StepperState::StepperState(SchemeKind scheme, const Field& u0, const Params& p, double dt,
                           solvers::NewtonSettings newton)
    : scheme_(scheme), p_(p), dt_(dt), u_(u0), u_prev_(u0.grid), z_(u0.grid) {
  switch (scheme_) {
    case SchemeKind::euler_box: {
      auto [a, b] = euler_box_start(u0, p, dt);
      u_prev_ = a;
      u_ = b;
      have_prev_ = true;
      step_ = 1;
      break;
    }
    case SchemeKind::preissmann: {
      preissmann_.emplace(u0.grid, p, dt, newton);
      // Box-consistent lift; the time derivative comes from a centered pair
      // of Heun steps.
      Field fwd = heun_step(u0, p, dt);
      Field bwd = heun_step(u0, p, -dt);
      Field ut(u0.grid);
      for (int i = 0; i < u0.size(); ++i) ut[i] = (fwd[i] - bwd[i]) / (2.0 * dt);
      z_ = lift_state_box(u0, ut, p.beta);
      break;
    }
    case SchemeKind::tvm:
      tvm_.emplace(u0.grid, dt, newton);
      break;
    case SchemeKind::heun:
    case SchemeKind::rk4:
      break;
  }
}

void StepperState::advance() {
  switch (scheme_) {
    case SchemeKind::euler_box: {
      Field next = euler_box_step(u_prev_, u_, p_, dt_);
      u_prev_ = u_;
      u_ = next;
      break;
    }
    case SchemeKind::preissmann: {
      auto res = preissmann_->step(z_);
      z_ = std::move(res.z_next);
      u_ = z_.u;
      last_newton_iterations_ = res.newton_iterations;
      break;
    }
    case SchemeKind::tvm: {
      auto [next, iters] = tvm_->step_with_count(u_, have_prev_ ? &u_prev_ : nullptr);
      u_prev_ = u_;
      have_prev_ = true;
      u_ = next;
      last_newton_iterations_ = iters;
      break;
    }
    case SchemeKind::heun:
      u_ = heun_step(u_, p_, dt_);
      break;
    case SchemeKind::rk4:
      u_ = rk4_step(u_, p_, dt_);
      break;
  }
  ++step_;
}

}  // namespace benj::integrators
