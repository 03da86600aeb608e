#pragma once

#include <complex>
#include <vector>

#include "benj/grid.hpp"

namespace benj::spectral {

/// Convolution weights of the discrete Hilbert transform, one period.
/// Even N uses the cot weights on odd offsets; odd N mixes cot and tan.
struct HilbertKernel {
  std::vector<double> coeffs;
  Parity parity = Parity::even;
};

/// Diagonal Fourier symbols: the sign diagonal driving the Hilbert transform
/// and the integer wavenumber diagonal driving the spectral derivative.
struct SpectralSymbols {
  std::vector<int> sgn_diag;
  std::vector<int> wave_diag;
};

HilbertKernel hilbert_kernel(int n);
SpectralSymbols spectral_symbols(int n);

/// Unnormalized forward DFT: X_k = sum_n x_n exp(-2*pi*i*n*k/N).
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x);
/// Inverse with the 1/N normalization.
std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x);

/// F^{-1} diag(multiplier) F u for real u. Asserts the imaginary residue of
/// the inverse transform stays below 1e-10 * max|u| before discarding it,
/// so a mis-indexed symbol fails loudly instead of leaking complex parts.
Field apply_fourier_multiplier(const Field& u, const std::vector<std::complex<double>>& multiplier);

/// O(N^2) cyclic convolution with the Hilbert kernel; oracle for hilbert_fft.
Field hilbert_direct(const Field& u);

/// Discrete Hilbert transform through the DFT: symbol -i * sgn_diag.
Field hilbert_fft(const Field& u);

/// Spectral first derivative: symbol i * (2*pi/l) * wave_diag.
Field spectral_derivative(const Field& u);

/// Symmetric nonlocal operator (Hilbert transform composed with the spectral
/// derivative): real symbol (2*pi/l) * wave_diag * sgn_diag.
Field apply_L(const Field& u);

enum class DiffVariant { plus, minus, centered };

/// Cyclic finite differences with spacing dx.
Field central_diff(const Field& u, DiffVariant variant);

}  // namespace benj::spectral
