#pragma once

// Collective spin operators on the Dicke basis |j = N/2, m = k - j>.

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace spinsq::detail {

/// (J_x c, J_y c, J_z c) for Dicke amplitudes c.
inline std::array<Eigen::VectorXcd, 3> apply_collective(const Eigen::VectorXcd& c) {
  const Eigen::Index dim = c.size();
  const double j = (dim - 1) / 2.0;
  Eigen::VectorXcd raised = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd lowered = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd jz(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double m = k - j;
    jz[k] = m * c[k];
    if (k + 1 < dim) {
      const double coef = std::sqrt(j * (j + 1) - m * (m + 1));
      raised[k + 1] += coef * c[k];
      lowered[k] += coef * c[k + 1];
    }
  }
  const std::complex<double> i_unit(0.0, 1.0);
  return {0.5 * (raised + lowered), -0.5 * i_unit * (raised - lowered), std::move(jz)};
}

struct DickeMoments {
  Eigen::Vector3d mean;            // <J_a>
  Eigen::Matrix3d anticommutator;  // <{J_a, J_b}>
};

inline DickeMoments dicke_moments(const Eigen::VectorXcd& c) {
  const auto applied = apply_collective(c);
  DickeMoments out;
  for (int a = 0; a < 3; ++a) {
    out.mean[a] = c.dot(applied[a]).real();
    for (int b = 0; b < 3; ++b) out.anticommutator(a, b) = 2.0 * applied[a].dot(applied[b]).real();
  }
  return out;
}

}  // namespace spinsq::detail
