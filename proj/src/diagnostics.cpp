#include "benj/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace benj::diagnostics {

using spectral::central_diff;
using spectral::DiffVariant;

InvariantRecord invariants(const Field& u, const Params& p, double t) {
  int n = u.size();
  double dx = u.grid.dx;
  Field lu = spectral::apply_L(u);
  Field ux = central_diff(u, DiffVariant::centered);
  double mass = 0.0, mom = 0.0, energy = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = u[i];
    mass += v;
    mom += v * v;
    energy += -0.5 * p.gamma * v * v - p.lambda / 6.0 * v * v * v + 0.5 * p.alpha * v * lu[i] -
              0.5 * p.beta * ux[i] * ux[i];
  }
  return InvariantRecord{t, dx * mass, -0.5 * dx * mom, dx * energy};
}

namespace {

// a^T M b with M coupling only (u, phi): M[0][1] = 1/2, M[1][0] = -1/2.
double wedge_m(const StateZ& a, const StateZ& b, int i) {
  return 0.5 * (a.u[i] * b.phi[i] - a.phi[i] * b.u[i]);
}

}  // namespace

double two_form_sum(const TangentPair& pair) {
  const StateZ& xi0 = pair.xi[0];
  const StateZ& xi1 = pair.xi[1];
  const StateZ& eta0 = pair.eta[0];
  const StateZ& eta1 = pair.eta[1];
  check_same_grid(xi0.u, eta0.u, "two_form_sum");
  check_same_grid(xi0.u, xi1.u, "two_form_sum");
  double s = 0.0;
  for (int i = 0; i < xi0.u.size(); ++i)
    s += 0.5 * (wedge_m(xi0, eta1, i) - wedge_m(eta0, xi1, i));
  return s;
}

Field tangent_step(const Field& du_prev, const Field& du_curr, const Field& u_curr,
                   const Params& p, double dt) {
  check_same_grid(du_prev, du_curr, "tangent_step");
  check_same_grid(du_prev, u_curr, "tangent_step");
  if (du_curr.grid.parity != Parity::odd)
    throw std::invalid_argument("tangent_step: odd grid required (two-form lift)");
  Field jdu = linearize_rhs(u_curr, p).apply(du_curr);
  Field out(du_curr.grid);
  for (int i = 0; i < out.size(); ++i) out[i] = du_prev[i] + 2.0 * dt * jdu[i];
  return out;
}

ErrorNorms error_norms(const Field& u, const Field& ref) {
  check_same_grid(u, ref, "error_norms");
  double mx = 0.0, l2 = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    double d = u[i] - ref[i];
    mx = std::max(mx, std::abs(d));
    l2 += d * d;
  }
  return ErrorNorms{mx, std::sqrt(u.grid.dx * l2)};
}

ConvergenceResult fit_convergence(std::vector<ConvergenceLevel> levels) {
  if (levels.size() < 2)
    throw std::invalid_argument("fit_convergence: at least two levels required");
  ConvergenceResult res;
  res.levels = std::move(levels);

  double emax = 0.0;
  for (const auto& lv : res.levels) emax = std::max(emax, lv.error);
  if (emax < 1e-12) {
    res.degenerate = true;
    res.fitted_order = std::numeric_limits<double>::quiet_NaN();
    return res;
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double m = static_cast<double>(res.levels.size());
  for (const auto& lv : res.levels) {
    double x = std::log(lv.dx);
    double y = std::log(std::max(lv.error, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  res.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return res;
}

ConvergenceResult hilbert_convergence(
    const std::function<double(double)>& f, double length, const std::vector<int>& grid_sizes,
    const std::function<std::vector<double>(const Grid&)>& reference) {
  std::vector<ConvergenceLevel> levels;
  for (int n : grid_sizes) {
    Grid g = make_grid(length, n);
    Field u = Field::from_function(g, f);
    Field hu = spectral::hilbert_fft(u);
    std::vector<double> ref = reference(g);
    if (static_cast<int>(ref.size()) != n)
      throw std::invalid_argument("hilbert_convergence: reference size mismatch");
    double err = 0.0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(hu[i] - ref[static_cast<size_t>(i)]));
    levels.push_back(ConvergenceLevel{n, g.dx, err});
  }
  return fit_convergence(std::move(levels));
}

HilbertSeriesOracle::HilbertSeriesOracle(const std::function<double(double)>& f, double length,
                                         int modes)
    : length_(length), modes_(modes) {
  if (modes < 2 || modes % 2 != 0)
    throw std::invalid_argument("HilbertSeriesOracle: even mode count >= 2 required");
  const double pi = std::numbers::pi;
  const int m = modes;

  // Coefficients by direct summation over dense samples (no FFT machinery;
  // the oracle must not share code with the transform it checks).
  std::vector<double> samples(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) samples[static_cast<size_t>(i)] = f(length * i / m);
  coeff_.assign(static_cast<size_t>(m), 0.0);
  for (int k = 0; k < m; ++k) {
    std::complex<double> rot = 1.0;
    std::complex<double> stepk = std::polar(1.0, -2.0 * pi * double(k) / double(m));
    std::complex<double> s = 0.0;
    for (int i = 0; i < m; ++i) {
      s += samples[static_cast<size_t>(i)] * rot;
      rot *= stepk;
    }
    coeff_[static_cast<size_t>(k)] = s / double(m);
  }
}

std::vector<double> HilbertSeriesOracle::evaluate(const std::vector<double>& points) const {
  const double pi = std::numbers::pi;
  const int m = modes_;
  // H e^{ikx} = -i sgn(k) e^{ikx}; evaluate the truncated series directly.
  std::vector<double> out(points.size(), 0.0);
  for (size_t j = 0; j < points.size(); ++j) {
    std::complex<double> acc = 0.0;
    std::complex<double> ph = 1.0;
    std::complex<double> stepx = std::polar(1.0, 2.0 * pi * points[j] / length_);
    for (int k = 1; k < m / 2; ++k) {
      ph *= stepx;
      acc += std::complex<double>(0.0, -1.0) * coeff_[static_cast<size_t>(k)] * ph;
      acc += std::complex<double>(0.0, 1.0) * coeff_[static_cast<size_t>(m - k)] * std::conj(ph);
    }
    out[j] = acc.real();
  }
  return out;
}

std::vector<double> hilbert_series_reference(const std::function<double(double)>& f,
                                             double length, int modes,
                                             const std::vector<double>& points) {
  return HilbertSeriesOracle(f, length, modes).evaluate(points);
}

}  // namespace benj::diagnostics
