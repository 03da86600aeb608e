#include "benj/solvers.hpp"

#include <algorithm>
#include <cmath>

extern "C" {
void dgetrf_(const int* m, const int* n, double* a, const int* lda, int* ipiv, int* info);
void dgetrs_(const char* trans, const int* n, const int* nrhs, const double* a, const int* lda,
             const int* ipiv, double* b, const int* ldb, int* info);
}

namespace benj::solvers {

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw std::invalid_argument("lu: square matrix required");
  int n = lu_.rows();
  double scale = lu_.max_abs();
  ipiv_.assign(static_cast<size_t>(n), 0);
  int info = 0;
  // Row-major A is column-major A^T; factor the transpose and solve with
  // trans='T' later.
  dgetrf_(&n, &n, lu_.data(), &n, ipiv_.data(), &info);
  if (info < 0) throw std::runtime_error("lu: bad argument to dgetrf");
  if (info > 0) throw SingularMatrixError(0.0, info - 1);
  // Diagonal of U carries the pivots after row exchanges.
  double threshold = 1e-14 * std::max(scale, 1e-300);
  for (int i = 0; i < n; ++i) {
    double pivot = std::abs(lu_(i, i));
    if (pivot < threshold) throw SingularMatrixError(pivot, i);
  }
}

std::vector<double> LuFactorization::solve(const std::vector<double>& b) const {
  int n = lu_.rows();
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("lu: rhs size mismatch");
  std::vector<double> x(b);
  int one = 1, info = 0;
  char trans = 'T';
  dgetrs_(&trans, &n, &one, lu_.data(), &n, ipiv_.data(), x.data(), &n, &info);
  if (info != 0) throw std::runtime_error("lu: dgetrs failed");
  return x;
}

std::vector<double> lu_solve(const Matrix& a, const std::vector<double>& b) {
  return LuFactorization(a).solve(b);
}

namespace {

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  int n = a.rows(), m = a.cols();
  std::vector<double> y(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const double* row = a.data() + static_cast<size_t>(i) * m;
    for (int j = 0; j < m; ++j) s += row[j] * x[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = s;
  }
  return y;
}

}  // namespace

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                          std::vector<double> guess, const NewtonSettings& settings) {
  std::vector<double> x = std::move(guess);
  double rnorm = 0.0;
  for (int it = 0; it <= settings.max_iter; ++it) {
    std::vector<double> r = residual(x);
    rnorm = max_abs(r);
    if (rnorm <= settings.tol) return NewtonResult{std::move(x), it, rnorm};
    if (it == settings.max_iter) break;

    Matrix j = (settings.jacobian_mode == JacobianMode::analytic)
                   ? jacobian(x)
                   : finite_difference_jacobian(residual, x);
    LuFactorization lu(j);
    std::vector<double> step = lu.solve(r);
    std::vector<double> correction = matvec(j, step);
    for (size_t i = 0; i < correction.size(); ++i) correction[i] = r[i] - correction[i];
    std::vector<double> fix = lu.solve(correction);
    for (size_t i = 0; i < x.size(); ++i) x[i] -= step[i] + fix[i];
  }
  throw NewtonError(settings.max_iter, rnorm);
}

Matrix finite_difference_jacobian(const ResidualFn& residual, const std::vector<double>& x) {
  int n = static_cast<int>(x.size());
  Matrix j(n, n);
  std::vector<double> xp(x), xm(x);
  for (int col = 0; col < n; ++col) {
    double h = 1e-6 * (1.0 + std::abs(x[static_cast<size_t>(col)]));
    xp[static_cast<size_t>(col)] = x[static_cast<size_t>(col)] + h;
    xm[static_cast<size_t>(col)] = x[static_cast<size_t>(col)] - h;
    std::vector<double> rp = residual(xp);
    std::vector<double> rm = residual(xm);
    for (int row = 0; row < n; ++row)
      j(row, col) = (rp[static_cast<size_t>(row)] - rm[static_cast<size_t>(row)]) / (2.0 * h);
    xp[static_cast<size_t>(col)] = x[static_cast<size_t>(col)];
    xm[static_cast<size_t>(col)] = x[static_cast<size_t>(col)];
  }
  return j;
}

}  // namespace benj::solvers
