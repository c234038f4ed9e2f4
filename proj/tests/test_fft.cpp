// test_fft.cpp

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "nlcor/errors.hpp"
#include "nlcor/fft.hpp"
#include "nlcor/rng.hpp"
#include "test_support.hpp"

using nlcor::cdouble;

namespace {

std::vector<cdouble> random_complex(nlcor::Rng& rng, int n) {
  std::vector<cdouble> x(n);
  for (auto& v : x) v = cdouble(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  return x;
}

double max_abs_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("fft") {

TEST_CASE("matches the naive dft across radix-2 and bluestein sizes") {
  nlcor::Rng rng(7101);
  for (int n : {1, 2, 3, 4, 5, 8, 12, 16, 100, 251, 256, 500, 1000}) {
    const auto x = random_complex(rng, n);
    const auto fast = nlcor::fft_forward(x);
    const auto slow = testsupport::naive_dft(x, -1);
    CHECK(max_abs_diff(fast, slow) < 1e-9 * n);
  }
}

TEST_CASE("inverse undoes forward") {
  nlcor::Rng rng(7102);
  for (int n : {4, 7, 64, 441, 1000}) {
    const auto x = random_complex(rng, n);
    const auto back = nlcor::fft_inverse(nlcor::fft_forward(x));
    CHECK(max_abs_diff(x, back) < 1e-12 * n);
  }
}

TEST_CASE("real input gives a conjugate-symmetric spectrum") {
  nlcor::Rng rng(7103);
  for (int n : {6, 9, 128, 1000}) {
    const auto x = testsupport::random_series(rng, n);
    const auto spec = nlcor::spectrum(x);
    for (int f = 1; f < n; ++f) {
      CHECK(std::abs(spec[f] - std::conj(spec[n - f])) < 1e-10);
    }
    CHECK(std::abs(spec[0].imag()) < 1e-12);
  }
}

TEST_CASE("inverse_real reports a tiny imaginary residue") {
  nlcor::Rng rng(7104);
  const auto x = testsupport::random_series(rng, 250);
  double residue = 1.0;
  const auto back = nlcor::inverse_real(nlcor::spectrum(x), &residue);
  CHECK(residue < 1e-10);
  for (int t = 0; t < 250; ++t) CHECK(back[t] == doctest::Approx(x[t]).epsilon(1e-10));
}

TEST_CASE("mode_phase maps to the half-open interval") {
  CHECK(nlcor::mode_phase(cdouble(-1.0, 0.0)) == doctest::Approx(std::numbers::pi));
  CHECK(nlcor::mode_phase(cdouble(-1.0, -0.0)) == doctest::Approx(std::numbers::pi));
  CHECK(nlcor::mode_phase(cdouble(1.0, 0.0)) == 0.0);
  CHECK(nlcor::mode_phase(cdouble(0.0, -1.0)) == doctest::Approx(-std::numbers::pi / 2));
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(nlcor::fft_forward({}), nlcor::ValidationError);
}

}  // TEST_SUITE
