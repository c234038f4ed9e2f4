// fft.hpp
// Complex FFT used for surrogate generation and phase maps.
//
// Power-of-two lengths run through an iterative radix-2 transform with a
// precomputed twiddle table; every other length goes through Bluestein's
// chirp-z algorithm, so arbitrary window lengths are supported. The forward
// transform is unnormalized, X(l) = sum_t x_t e^{-2 pi i t l / T}; the
// inverse applies the 1/T factor.

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nlcor {

using cdouble = std::complex<double>;

std::vector<cdouble> fft_forward(std::span<const cdouble> x);
std::vector<cdouble> fft_inverse(std::span<const cdouble> x);

// Forward transform of a real series.
std::vector<cdouble> spectrum(std::span<const double> x);

// Inverse transform of a conjugate-symmetric spectrum. Returns the real part;
// if max_imag is non-null it receives the largest absolute imaginary residue,
// which should be at roundoff level for a valid spectrum.
std::vector<double> inverse_real(std::span<const cdouble> spec, double* max_imag = nullptr);

// Principal phase of a spectrum mode, mapped to (-pi, pi].
double mode_phase(const cdouble& v);

}  // namespace nlcor
