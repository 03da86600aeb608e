#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace benj::solvers {

/// Dense row-major matrix; sized for the desk-scale implicit systems here.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  double max_abs() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

struct SingularMatrixError : std::runtime_error {
  double pivot;
  int index;
  SingularMatrixError(double pivot_, int index_)
      : std::runtime_error("lu: matrix numerically singular (pivot " + std::to_string(pivot_) +
                           " at step " + std::to_string(index_) + ")"),
        pivot(pivot_),
        index(index_) {}
};

/// Partial-pivoting LU kept for repeated right-hand sides. A pivot below
/// 1e-14 times the largest entry of A is reported as singular; that signal
/// is what flags the even-N box systems.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix a);
  std::vector<double> solve(const std::vector<double>& b) const;

 private:
  Matrix lu_;
  std::vector<int> ipiv_;
};

/// One-shot solve; wraps LuFactorization. The result satisfies the residual
/// bound ||Ax - b||_inf <= 1e-10 (||A||_inf ||x||_inf + ||b||_inf) on
/// reasonably conditioned systems.
std::vector<double> lu_solve(const Matrix& a, const std::vector<double>& b);

enum class JacobianMode { analytic, finite_difference };

struct NewtonSettings {
  double tol = 1e-12;
  int max_iter = 25;
  JacobianMode jacobian_mode = JacobianMode::analytic;
};

struct NewtonResult {
  std::vector<double> x;
  int iterations = 0;
  double residual_norm = 0.0;
};

struct NewtonError : std::runtime_error {
  int iterations;
  double residual_norm;
  NewtonError(int iterations_, double residual_)
      : std::runtime_error("newton: no convergence after " + std::to_string(iterations_) +
                           " iterations (residual " + std::to_string(residual_) + ")"),
        iterations(iterations_),
        residual_norm(residual_) {}
};

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;
using JacobianFn = std::function<Matrix(const std::vector<double>&)>;

/// Plain Newton iteration on the residual max norm. Each linear solve gets
/// one pass of iterative refinement; without it the solve backward error
/// (cond * eps * ||r0||) can sit above a 1e-12 tolerance on the stiffer
/// box-scheme systems. Throws NewtonError when max_iter is exhausted.
NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                          std::vector<double> guess, const NewtonSettings& settings);

/// Symmetric-difference Jacobian with step 1e-6 (1 + |x_j|).
Matrix finite_difference_jacobian(const ResidualFn& residual, const std::vector<double>& x);

double max_abs(const std::vector<double>& v);

}  // namespace benj::solvers
