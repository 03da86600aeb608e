#include "benj/dynamics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace benj {

using spectral::apply_L;
using spectral::central_diff;
using spectral::DiffVariant;

StructureMatrices structure_matrices(const Params& p) {
  StructureMatrices s;
  s.m[0][1] = 0.5;
  s.m[1][0] = -0.5;
  s.k[0][3] = -p.beta;
  s.k[1][2] = 1.0;
  s.k[2][1] = -1.0;
  s.k[3][0] = p.beta;
  return s;
}

std::array<Field, 4> grad_S(const StateZ& z, const Params& p) {
  check_same_grid(z.u, z.phi, "grad_S");
  check_same_grid(z.u, z.w, "grad_S");
  check_same_grid(z.u, z.v, "grad_S");
  Field lu = apply_L(z.u);
  std::array<Field, 4> g{Field(z.u.grid), Field(z.u.grid), Field(z.u.grid), Field(z.u.grid)};
  for (int i = 0; i < z.u.size(); ++i) {
    double u = z.u[i];
    g[0][i] = -z.w[i] - p.gamma * u - 0.5 * p.lambda * u * u + p.alpha * lu[i];
    g[2][i] = -u;
    g[3][i] = p.beta * z.v[i];
  }
  return g;
}

Field reduced_rhs(const Field& u, const Params& p, DiffVariant variant) {
  int n = u.size();
  Field flux(u.grid);
  for (int i = 0; i < n; ++i)
    flux[i] = p.gamma * u[i] + 0.5 * p.lambda * u[i] * u[i];
  Field out = central_diff(flux, variant);
  for (int i = 0; i < n; ++i) out[i] = -out[i];
  if (p.alpha != 0.0) {
    Field dl = central_diff(apply_L(u), variant);
    for (int i = 0; i < n; ++i) out[i] += p.alpha * dl[i];
  }
  if (p.beta != 0.0) {
    Field d3 = central_diff(central_diff(central_diff(u, variant), variant), variant);
    for (int i = 0; i < n; ++i) out[i] += p.beta * d3[i];
  }
  return out;
}

Field LinearOperator::apply(const Field& du) const {
  check_same_grid(u_, du, "LinearOperator::apply");
  int n = du.size();
  Field flux(du.grid);
  for (int i = 0; i < n; ++i)
    flux[i] = p_.gamma * du[i] + p_.lambda * u_[i] * du[i];
  if (p_.alpha != 0.0) {
    Field ldu = apply_L(du);
    for (int i = 0; i < n; ++i) flux[i] -= p_.alpha * ldu[i];
  }
  Field out = central_diff(flux, DiffVariant::centered);
  for (int i = 0; i < n; ++i) out[i] = -out[i];
  if (p_.beta != 0.0) {
    Field d3 = central_diff(
        central_diff(central_diff(du, DiffVariant::centered), DiffVariant::centered),
        DiffVariant::centered);
    for (int i = 0; i < n; ++i) out[i] += p_.beta * d3[i];
  }
  return out;
}

std::vector<double> LinearOperator::to_dense() const {
  int n = size();
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  Field e(u_.grid);
  for (int j = 0; j < n; ++j) {
    e.values.assign(static_cast<size_t>(n), 0.0);
    e[j] = 1.0;
    Field col = apply(e);
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + j] = col[i];
  }
  return a;
}

namespace {

// Solve (cyclic circulant with the given Fourier symbol) x = rhs - mean(rhs),
// normalizing x to zero mean. The symbol must be nonzero away from mode 0.
Field invert_symbol(const Field& rhs, const std::vector<std::complex<double>>& symbol,
                    const char* where) {
  int n = rhs.size();
  double mean = rhs.mean();
  std::vector<std::complex<double>> buf(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) buf[static_cast<size_t>(i)] = rhs[i] - mean;
  buf = spectral::dft(buf);
  buf[0] = 0.0;
  for (int k = 1; k < n; ++k) {
    auto s = symbol[static_cast<size_t>(k)];
    if (std::abs(s) < 1e-14)
      throw std::runtime_error(std::string(where) + ": singular difference symbol");
    buf[static_cast<size_t>(k)] /= s;
  }
  buf = spectral::idft(buf);
  Field out(rhs.grid);
  for (int i = 0; i < n; ++i) out[i] = buf[static_cast<size_t>(i)].real();
  return out;
}

std::vector<std::complex<double>> centered_symbol(const Grid& g) {
  std::vector<std::complex<double>> s(static_cast<size_t>(g.n));
  for (int k = 0; k < g.n; ++k)
    s[static_cast<size_t>(k)] = std::complex<double>(
        0.0, std::sin(2.0 * std::numbers::pi * k / g.n) / g.dx);
  return s;
}

std::vector<std::complex<double>> forward_symbol(const Grid& g) {
  std::vector<std::complex<double>> s(static_cast<size_t>(g.n));
  for (int k = 0; k < g.n; ++k) {
    auto ph = std::polar(1.0, 2.0 * std::numbers::pi * k / g.n);
    s[static_cast<size_t>(k)] = (ph - 1.0) / g.dx;
  }
  return s;
}

std::vector<std::complex<double>> average_symbol(const Grid& g) {
  std::vector<std::complex<double>> s(static_cast<size_t>(g.n));
  for (int k = 0; k < g.n; ++k) {
    auto ph = std::polar(1.0, 2.0 * std::numbers::pi * k / g.n);
    s[static_cast<size_t>(k)] = 0.5 * (ph + 1.0);
  }
  return s;
}

Field apply_symbol(const Field& u, const std::vector<std::complex<double>>& symbol) {
  return spectral::apply_fourier_multiplier(u, symbol);
}

// Full inversion for symbols nonzero on every mode (the averaging symbol on
// odd grids).
Field invert_symbol_full(const Field& rhs, const std::vector<std::complex<double>>& symbol,
                         const char* where) {
  int n = rhs.size();
  std::vector<std::complex<double>> buf(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) buf[static_cast<size_t>(i)] = rhs[i];
  buf = spectral::dft(buf);
  for (int k = 0; k < n; ++k) {
    auto s = symbol[static_cast<size_t>(k)];
    if (std::abs(s) < 1e-14)
      throw std::runtime_error(std::string(where) + ": singular symbol");
    buf[static_cast<size_t>(k)] /= s;
  }
  buf = spectral::idft(buf);
  Field out(rhs.grid);
  for (int i = 0; i < n; ++i) out[i] = buf[static_cast<size_t>(i)].real();
  return out;
}

}  // namespace

Field invert_centered_diff(const Field& rhs) {
  if (rhs.grid.parity != Parity::odd)
    throw std::invalid_argument(
        "invert_centered_diff: centered difference is invertible on mean-free data only for odd N");
  return invert_symbol(rhs, centered_symbol(rhs.grid), "invert_centered_diff");
}

StateZ lift_state(const Field& u, const std::optional<Field>& u_prev,
                  const std::optional<Field>& u_next, double dt) {
  if (u.grid.parity != Parity::odd)
    throw std::invalid_argument("lift_state: odd grid required");
  StateZ z(u.grid);
  z.u = u;
  z.phi = invert_centered_diff(u);
  z.v = central_diff(u, DiffVariant::centered);
  if (u_prev && u_next) {
    check_same_grid(u, *u_prev, "lift_state");
    check_same_grid(u, *u_next, "lift_state");
    Field dtu(u.grid);
    for (int i = 0; i < u.size(); ++i)
      dtu[i] = 0.5 * ((*u_next)[i] - (*u_prev)[i]) / (2.0 * dt);
    z.w = invert_centered_diff(dtu);
  }
  return z;
}

StateZ lift_state_box(const Field& u, const Field& u_t, double beta) {
  check_same_grid(u, u_t, "lift_state_box");
  if (u.grid.parity != Parity::odd)
    throw std::invalid_argument("lift_state_box: odd grid required");
  const Grid& g = u.grid;
  auto fwd = forward_symbol(g);
  auto avg = average_symbol(g);
  StateZ z(g);
  z.u = u;
  z.phi = invert_symbol(apply_symbol(u, avg), fwd, "lift_state_box");
  z.w = invert_symbol(apply_symbol(0.5 * u_t, avg), fwd, "lift_state_box");
  if (beta != 0.0)
    z.v = invert_symbol_full(apply_symbol(u, fwd), avg, "lift_state_box");
  else
    // v rows drop out of the scheme entirely; keep the centered gauge.
    z.v = central_diff(u, DiffVariant::centered);
  return z;
}

}  // namespace benj
