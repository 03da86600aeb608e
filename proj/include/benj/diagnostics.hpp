#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "benj/dynamics.hpp"

namespace benj::diagnostics {

/// Sampled values of the three conserved functionals:
///   mass = dx sum u,  momentum = -dx sum u^2 / 2,
///   energy = dx sum( -(gamma/2) u^2 - (lambda/6) u^3
///                    + (alpha/2) u (L u) - (beta/2) (delta_x u)^2 ).
struct InvariantRecord {
  double t = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};

InvariantRecord invariants(const Field& u, const Params& p, double t = 0.0);

/// Two tangent trajectories, each held at two consecutive time levels to
/// match the two-level stencil of the discrete two-form.
struct TangentPair {
  std::array<StateZ, 2> xi;   // levels i-1, i
  std::array<StateZ, 2> eta;
};

/// Global two-form sum  sum_n (1/2)(xi_n^{i-1,T} M eta_n^i - eta_n^{i-1,T} M xi_n^i);
/// M couples only the u and phi components.
double two_form_sum(const TangentPair& pair);

/// Linearized leapfrog along a stored background:
///   du_next = du_prev + 2 dt J(u_curr) du_curr.
Field tangent_step(const Field& du_prev, const Field& du_curr, const Field& u_curr,
                   const Params& p, double dt);

struct ErrorNorms {
  double max_norm = 0.0;
  double l2 = 0.0;
};

ErrorNorms error_norms(const Field& u, const Field& ref);

struct ConvergenceLevel {
  int n = 0;
  double dx = 0.0;
  double error = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;
  double fitted_order = 0.0;
  /// Errors at round-off: the least-squares slope is meaningless and the
  /// order is reported as not applicable.
  bool degenerate = false;
};

/// Least-squares slope of log(error) against log(dx). Requires >= 2 levels.
ConvergenceResult fit_convergence(std::vector<ConvergenceLevel> levels);

/// Grid-refinement study of the discrete Hilbert transform against a
/// reference transform evaluated at the grid nodes.
ConvergenceResult hilbert_convergence(const std::function<double(double)>& f, double length,
                                      const std::vector<int>& grid_sizes,
                                      const std::function<std::vector<double>(const Grid&)>& reference);

/// Truncated-series reference for the periodic Hilbert transform: samples f
/// on a dense grid, extracts `modes` Fourier coefficients by direct
/// summation, applies -i sgn(k) analytically, and evaluates the series at
/// the requested points. Deliberately avoids the spectral module.
class HilbertSeriesOracle {
 public:
  HilbertSeriesOracle(const std::function<double(double)>& f, double length, int modes);
  std::vector<double> evaluate(const std::vector<double>& points) const;

 private:
  double length_;
  int modes_;
  std::vector<std::complex<double>> coeff_;
};

std::vector<double> hilbert_series_reference(const std::function<double(double)>& f,
                                             double length, int modes,
                                             const std::vector<double>& points);

}  // namespace benj::diagnostics
