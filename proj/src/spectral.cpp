#include "benj/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace benj::spectral {

namespace {

// Plans are cached per (N, direction) and executed on caller-owned buffers via
// the new-array interface; the planner itself is guarded (FFTW planning is not
// thread-safe, execution on distinct arrays is).
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  void execute(int n, int sign, std::complex<double>* in, std::complex<double>* out) {
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto key = std::make_pair(n, sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        std::vector<std::complex<double>> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
      } else {
        plan = it->second;
      }
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace

HilbertKernel hilbert_kernel(int n) {
  if (n < 3) throw std::invalid_argument("hilbert_kernel: need at least 3 points");
  const double pi = std::numbers::pi;
  HilbertKernel k;
  k.parity = (n % 2 == 0) ? Parity::even : Parity::odd;
  k.coeffs.assign(static_cast<size_t>(n), 0.0);
  if (k.parity == Parity::even) {
    // c_m = (2/N) cot(pi m / N) for odd m, zero for even m.
    for (int m = 1; m < n; m += 2)
      k.coeffs[static_cast<size_t>(m)] = 2.0 / n / std::tan(pi * m / n);
  } else {
    // d_m = (1/N) cot(pi m / (2N)) for odd m, -(1/N) tan(pi m / (2N)) for even m.
    for (int m = 1; m < n; ++m) {
      double a = pi * m / (2.0 * n);
      k.coeffs[static_cast<size_t>(m)] =
          (m % 2 == 1) ? 1.0 / n / std::tan(a) : -std::tan(a) / n;
    }
  }
  return k;
}

SpectralSymbols spectral_symbols(int n) {
  if (n < 3) throw std::invalid_argument("spectral_symbols: need at least 3 points");
  SpectralSymbols s;
  s.sgn_diag.assign(static_cast<size_t>(n), 0);
  s.wave_diag.assign(static_cast<size_t>(n), 0);
  if (n % 2 == 0) {
    int half = n / 2;
    for (int k = 1; k < half; ++k) {
      s.sgn_diag[static_cast<size_t>(k)] = 1;
      s.sgn_diag[static_cast<size_t>(n - k)] = -1;
      s.wave_diag[static_cast<size_t>(k)] = k;
      s.wave_diag[static_cast<size_t>(n - k)] = -k;
    }
    // Nyquist row is zero in both diagonals.
  } else {
    int half = (n - 1) / 2;
    for (int k = 1; k <= half; ++k) {
      s.sgn_diag[static_cast<size_t>(k)] = 1;
      s.sgn_diag[static_cast<size_t>(n - k)] = -1;
      s.wave_diag[static_cast<size_t>(k)] = k;
      s.wave_diag[static_cast<size_t>(n - k)] = -k;
    }
  }
  return s;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  std::vector<std::complex<double>> in(x), out(x.size());
  PlanCache::instance().execute(static_cast<int>(x.size()), FFTW_FORWARD, in.data(), out.data());
  return out;
}

std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x) {
  std::vector<std::complex<double>> in(x), out(x.size());
  PlanCache::instance().execute(static_cast<int>(x.size()), FFTW_BACKWARD, in.data(), out.data());
  double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

Field apply_fourier_multiplier(const Field& u,
                               const std::vector<std::complex<double>>& multiplier) {
  int n = u.size();
  if (static_cast<int>(multiplier.size()) != n)
    throw std::invalid_argument("apply_fourier_multiplier: symbol size mismatch");
  std::vector<std::complex<double>> buf(static_cast<size_t>(n)), hat(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) buf[static_cast<size_t>(i)] = u[i];
  PlanCache::instance().execute(n, FFTW_FORWARD, buf.data(), hat.data());
  for (int k = 0; k < n; ++k) hat[static_cast<size_t>(k)] *= multiplier[static_cast<size_t>(k)];
  PlanCache::instance().execute(n, FFTW_BACKWARD, hat.data(), buf.data());

  double scale = 1.0 / static_cast<double>(n);
  double residue = 0.0;
  Field out(u.grid);
  for (int i = 0; i < n; ++i) {
    residue = std::max(residue, std::abs(buf[static_cast<size_t>(i)].imag()) * scale);
    out[i] = buf[static_cast<size_t>(i)].real() * scale;
  }
  if (residue > 1e-10 * std::max(u.max_abs(), 1e-300))
    throw std::runtime_error("apply_fourier_multiplier: imaginary residue exceeds bound");
  return out;
}

Field hilbert_direct(const Field& u) {
  int n = u.size();
  HilbertKernel k = hilbert_kernel(n);
  Field out(u.grid);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      int d = i - j;
      if (d < 0) d += n;
      s += k.coeffs[static_cast<size_t>(d)] * u[j];
    }
    out[i] = s;
  }
  return out;
}

Field hilbert_fft(const Field& u) {
  SpectralSymbols s = spectral_symbols(u.size());
  std::vector<std::complex<double>> mult(static_cast<size_t>(u.size()));
  for (int k = 0; k < u.size(); ++k)
    mult[static_cast<size_t>(k)] = std::complex<double>(0.0, -double(s.sgn_diag[static_cast<size_t>(k)]));
  return apply_fourier_multiplier(u, mult);
}

Field spectral_derivative(const Field& u) {
  SpectralSymbols s = spectral_symbols(u.size());
  double w0 = 2.0 * std::numbers::pi / u.grid.length;
  std::vector<std::complex<double>> mult(static_cast<size_t>(u.size()));
  for (int k = 0; k < u.size(); ++k)
    mult[static_cast<size_t>(k)] = std::complex<double>(0.0, w0 * s.wave_diag[static_cast<size_t>(k)]);
  return apply_fourier_multiplier(u, mult);
}

Field apply_L(const Field& u) {
  SpectralSymbols s = spectral_symbols(u.size());
  double w0 = 2.0 * std::numbers::pi / u.grid.length;
  std::vector<std::complex<double>> mult(static_cast<size_t>(u.size()));
  for (int k = 0; k < u.size(); ++k)
    mult[static_cast<size_t>(k)] =
        w0 * double(s.wave_diag[static_cast<size_t>(k)] * s.sgn_diag[static_cast<size_t>(k)]);
  return apply_fourier_multiplier(u, mult);
}

Field central_diff(const Field& u, DiffVariant variant) {
  int n = u.size();
  double dx = u.grid.dx;
  Field out(u.grid);
  switch (variant) {
    case DiffVariant::plus:
      for (int i = 0; i < n; ++i) out[i] = (u.at_wrapped(i + 1) - u[i]) / dx;
      break;
    case DiffVariant::minus:
      for (int i = 0; i < n; ++i) out[i] = (u[i] - u.at_wrapped(i - 1)) / dx;
      break;
    case DiffVariant::centered:
      for (int i = 0; i < n; ++i)
        out[i] = (u.at_wrapped(i + 1) - u.at_wrapped(i - 1)) / (2.0 * dx);
      break;
  }
  return out;
}

}  // namespace benj::spectral
