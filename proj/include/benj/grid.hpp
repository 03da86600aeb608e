#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace benj {

enum class Parity { even, odd };

/// Uniform periodic mesh on [0, l) with nodes x_n = n*dx, n = 0..N-1.
struct Grid {
  double length = 0.0;
  int n = 0;
  double dx = 0.0;
  Parity parity = Parity::even;

  double node(int i) const { return static_cast<double>(i) * dx; }
  bool operator==(const Grid&) const = default;
};

inline Grid make_grid(double length, int n) {
  if (!(length > 0.0)) throw std::invalid_argument("make_grid: domain length must be positive");
  if (n < 3) throw std::invalid_argument("make_grid: need at least 3 grid points");
  Grid g;
  g.length = length;
  g.n = n;
  g.dx = length / static_cast<double>(n);
  g.parity = (n % 2 == 0) ? Parity::even : Parity::odd;
  return g;
}

/// One period of a grid function, index-periodic: u[n] ~ u(n*dx).
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(static_cast<size_t>(g.n), 0.0) {}
  Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != g.n)
      throw std::invalid_argument("Field: value count does not match grid");
  }

  int size() const { return grid.n; }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }

  /// Cyclic access for stencil code.
  double at_wrapped(int i) const {
    int n = grid.n;
    int j = i % n;
    if (j < 0) j += n;
    return values[static_cast<size_t>(j)];
  }

  static Field from_function(const Grid& g, const std::function<double(double)>& f) {
    Field u(g);
    for (int i = 0; i < g.n; ++i) u[i] = f(g.node(i));
    return u;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  double sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }

  double mean() const { return sum() / static_cast<double>(grid.n); }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline void check_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid == b.grid)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

inline Field operator*(double s, const Field& a) {
  Field r(a.grid);
  for (int i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

}  // namespace benj
