#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "spinsq/states.hpp"

namespace fixtures {

inline constexpr double kPi = std::numbers::pi;

inline spinsq::PureState two_qubit(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                                   std::complex<double> d) {
  Eigen::VectorXcd v(4);
  v << a, b, c, d;
  return spinsq::PureState(2, v);
}

/// cos t |00> + sin t |11>
inline spinsq::PureState schmidt_state(double t) { return two_qubit(std::cos(t), 0, 0, std::sin(t)); }

/// cos t |01> + sin t |10>
inline spinsq::PureState flipped_schmidt_state(double t) { return two_qubit(0, std::cos(t), std::sin(t), 0); }

inline spinsq::PureState bell_state() { return schmidt_state(kPi / 4); }

/// (sqrt3/2, 1/2) (x) (sqrt3/2, -1/2): mean spin along z with unequal transverse spreads.
inline spinsq::PureState tilted_product_state() {
  const std::vector<spinsq::Spinor> f = {spinsq::Spinor(std::sqrt(3.0) / 2, 0.5),
                                         spinsq::Spinor(std::sqrt(3.0) / 2, -0.5)};
  return spinsq::product_state(f);
}

inline spinsq::PureState ghz_state(int n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  v[0] = v[v.size() - 1] = 1.0 / std::sqrt(2.0);
  return spinsq::PureState(n, v);
}

inline Eigen::Matrix2cd spinor_projector(const spinsq::Spinor& s) { return s * s.adjoint(); }

}  // namespace fixtures
