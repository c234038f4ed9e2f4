// synthetic.hpp
// Deterministic synthetic return panels for tests and demos.
//
// Three regimes:
//   LinearGaussian   correlated Gaussian returns with a given correlation
//                    matrix (uniform pairwise rho by default),
//   NonlinearCoupled iid Gaussians except that series 1 carries a quadratic
//                    coupling to series 0: zero Pearson correlation between
//                    the pair but strong nonlinear dependence,
//   RegimeSwitch     first half LinearGaussian, second half NonlinearCoupled.
//
// A panel is a pure function of (spec, seed).

#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "nlcor/panel.hpp"

namespace nlcor {

enum class Regime { LinearGaussian, NonlinearCoupled, RegimeSwitch };

struct SyntheticSpec {
  int n_series = 5;
  int length = 1250;  // number of return steps
  Regime regime = Regime::LinearGaussian;
  double rho = 0.3;       // uniform pairwise correlation of the Gaussian core
  double coupling = 0.8;  // quadratic cross-coupling strength in [0, 1]
  double vol = 0.01;      // per-step return scale
  // Optional explicit correlation matrix for the LinearGaussian core; when
  // empty, a uniform-rho matrix is used. Must be positive definite.
  Eigen::MatrixXd correlation;
};

ReturnPanel gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Rebuild a price table from a return panel (prices start at initial_price;
// exponentiated cumulative sums). Panel dates must be ISO-8601 so the price
// date preceding the first return can be synthesized.
PriceTable to_price_table(const ReturnPanel& panel, double initial_price = 100.0);

}  // namespace nlcor
