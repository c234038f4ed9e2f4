// fft.cpp

#include "nlcor/fft.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>

#include "nlcor/errors.hpp"

namespace nlcor {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place radix-2 Cooley-Tukey. Twiddles are evaluated directly from
// cos/sin rather than by repeated multiplication, which keeps the transform
// accurate enough for the 1e-10 spectrum-preservation contract.
void fft_pow2(std::vector<cdouble>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cdouble> twiddle(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = sign * 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    twiddle[j] = cdouble(std::cos(ang), std::sin(ang));
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cdouble u = a[base + k];
        const cdouble v = a[base + k + half] * twiddle[k * stride];
        a[base + k] = u + v;
        a[base + k + half] = u - v;
      }
    }
  }
}

// Bluestein chirp-z transform for arbitrary n (forward only; the inverse is
// handled by conjugation in fft_inverse). The k^2 exponent is reduced
// modulo 2n before the trig evaluation to avoid large-argument precision
// loss.
std::vector<cdouble> fft_bluestein(std::span<const cdouble> x) {
  const std::size_t n = x.size();
  const std::size_t m = next_pow2(2 * n - 1);

  std::vector<cdouble> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long long k2 = static_cast<long long>(k) * static_cast<long long>(k) %
                         (2 * static_cast<long long>(n));
    const double ang = -kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = cdouble(std::cos(ang), std::sin(ang));
  }

  std::vector<cdouble> a(m, cdouble(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];

  std::vector<cdouble> b(m, cdouble(0.0, 0.0));
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = std::conj(chirp[k]);
    b[m - k] = b[k];
  }

  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft_pow2(a, true);

  std::vector<cdouble> out(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  return out;
}

}  // namespace

std::vector<cdouble> fft_forward(std::span<const cdouble> x) {
  if (x.empty()) throw ValidationError("fft: empty input");
  if (is_pow2(x.size())) {
    std::vector<cdouble> a(x.begin(), x.end());
    fft_pow2(a, false);
    return a;
  }
  return fft_bluestein(x);
}

std::vector<cdouble> fft_inverse(std::span<const cdouble> x) {
  const std::size_t n = x.size();
  std::vector<cdouble> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::conj(x[i]);
  std::vector<cdouble> f = fft_forward(a);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::conj(f[i]) * scale;
  return f;
}

std::vector<cdouble> spectrum(std::span<const double> x) {
  std::vector<cdouble> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = cdouble(x[i], 0.0);
  return fft_forward(a);
}

std::vector<double> inverse_real(std::span<const cdouble> spec, double* max_imag) {
  const std::vector<cdouble> t = fft_inverse(spec);
  std::vector<double> out(t.size());
  double residue = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] = t[i].real();
    residue = std::max(residue, std::abs(t[i].imag()));
  }
  if (max_imag != nullptr) *max_imag = residue;
  return out;
}

double mode_phase(const cdouble& v) {
  double ph = std::atan2(v.imag(), v.real());
  if (ph == -kPi) ph = kPi;
  return ph;
}

}  // namespace nlcor
