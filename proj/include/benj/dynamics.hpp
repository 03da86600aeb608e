#pragma once

#include <array>
#include <functional>
#include <optional>

#include "benj/grid.hpp"
#include "benj/spectral.hpp"

namespace benj {

/// Coefficients of u_t + gamma u_x + lambda u u_x - alpha L u_x - beta u_xxx = 0.
struct Params {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
};

/// Extended state z = [u, phi, w, v] on one grid.
struct StateZ {
  Field u, phi, w, v;

  StateZ() = default;
  explicit StateZ(const Grid& g) : u(g), phi(g), w(g), v(g) {}

  const Field& component(int c) const {
    switch (c) {
      case 0: return u;
      case 1: return phi;
      case 2: return w;
      default: return v;
    }
  }
  Field& component(int c) {
    switch (c) {
      case 0: return u;
      case 1: return phi;
      case 2: return w;
      default: return v;
    }
  }
};

/// Skew pair (M, K) of the first-order form M z_t + K z_x = dS/dz.
struct StructureMatrices {
  std::array<std::array<double, 4>, 4> m{};
  std::array<std::array<double, 4>, 4> k{};
};

StructureMatrices structure_matrices(const Params& p);

/// Variational derivative of S(z) = -wu - (gamma/2)u^2 - (lambda/6)u^3
/// + (alpha/2) u L u + (beta/2) v^2, with the nonlocal term differentiated
/// through the symmetry of L. Component 1 is identically zero.
std::array<Field, 4> grad_S(const StateZ& z, const Params& p);

/// Reduced single-variable vector field
///   g(u) = -D(gamma u + (lambda/2) u^2) + alpha D(L u) + beta D^3 u,
/// with D the chosen cyclic difference (centered everywhere in this suite)
/// and D^3 the threefold composition. Telescoping makes sum(g) vanish.
Field reduced_rhs(const Field& u, const Params& p,
                  spectral::DiffVariant variant = spectral::DiffVariant::centered);

/// Frechet derivative of reduced_rhs at u, applied matrix-free:
///   du -> -D(gamma du + lambda u du - alpha L du) + beta D^3 du.
class LinearOperator {
 public:
  LinearOperator(Field u, Params p) : u_(std::move(u)), p_(p) {}
  Field apply(const Field& du) const;
  /// Materialize on unit vectors; adequate for the dense solves used here.
  std::vector<double> to_dense() const;
  int size() const { return u_.size(); }

 private:
  Field u_;
  Params p_;
};

inline LinearOperator linearize_rhs(const Field& u, const Params& p) {
  return LinearOperator(u, p);
}

/// Invert the centered difference on the mean-free subspace (odd grids only;
/// on even grids the alternating vector joins the kernel and the solve is
/// rejected). The result is normalized to zero mean.
Field invert_centered_diff(const Field& rhs);

/// Reconstruct z = [u, phi, w, v] from u via the centered relations
///   delta_x phi = u - mean(u),  v = delta_x u,  delta_x w = (1/2) delta_t u,
/// where delta_t u is the centered time difference when both neighbors are
/// given and zero otherwise. phi and w are zero-mean.
StateZ lift_state(const Field& u, const std::optional<Field>& u_prev,
                  const std::optional<Field>& u_next, double dt);

/// Box-consistent variant used to start Preissmann runs: the constraints the
/// box scheme itself enforces are forward-difference/averaged,
///   delta_x^+ phi = A_x (u - mean u),  delta_x^+ w = (1/2) A_x u_t,
///   A_x v = delta_x^+ u (v = delta_x u when beta = 0 and v is inert),
/// so seeding with the centered lift leaves an O(dx^2) constraint mismatch
/// that the two-level algebra of the scheme turns into a growing oscillatory
/// component of w. u_t is the caller's estimate of the time derivative.
StateZ lift_state_box(const Field& u, const Field& u_t, double beta);

}  // namespace benj
