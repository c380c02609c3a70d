#pragma once

// Multiqubit state representations and constructors.
//
// Basis convention: sigma_z|0> = +|0>, qubit 0 is the most significant bit of
// the computational-basis index. In the Dicke (symmetric) basis the index k
// counts qubits in |0>, so k = 0 is |1>^N = |j, -j> and J_z = k - N/2.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace spinsq {

using Complex = std::complex<double>;
using Spinor = Eigen::Vector2cd;

inline constexpr int kMaxPureQubits = 20;
inline constexpr int kMaxDensityQubits = 10;
inline constexpr int kMaxSymmetricQubits = 2000;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

/// Normalized amplitude vector over N qubits (length 2^N).
class PureState {
 public:
  PureState(int num_qubits, Eigen::VectorXcd amplitudes);

  int num_qubits() const noexcept { return num_qubits_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  Eigen::Index dimension() const noexcept { return amplitudes_.size(); }

 private:
  int num_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite 2^N x 2^N matrix.
class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, Eigen::MatrixXcd matrix);

  static DensityMatrix from_pure(const PureState& state);

  int num_qubits() const noexcept { return num_qubits_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }

 private:
  int num_qubits_;
  Eigen::MatrixXcd matrix_;
};

/// Normalized state of the (N+1)-dimensional exchange-symmetric subspace.
/// dicke_amplitudes()[k] multiplies |j = N/2, m = k - N/2>.
class SymmetricState {
 public:
  SymmetricState(int num_qubits, Eigen::VectorXcd dicke_amplitudes);

  int num_qubits() const noexcept { return num_qubits_; }
  const Eigen::VectorXcd& dicke_amplitudes() const noexcept { return dicke_amplitudes_; }

 private:
  int num_qubits_;
  Eigen::VectorXcd dicke_amplitudes_;
};

/// One product term p * rho_1 (x) ... (x) rho_N of a separable mixture.
struct MixtureTerm {
  double weight = 0.0;
  std::vector<Eigen::Matrix2cd> factors;
};

using Mixture = std::vector<MixtureTerm>;

using AnyState = std::variant<PureState, DensityMatrix, SymmetricState>;

int num_qubits(const AnyState& state);

/// Checks that `rho` is a valid single-qubit density matrix.
void validate_qubit_density(const Eigen::Matrix2cd& rho);

SymmetricState coherent_spin_state(int num_qubits, double theta, double phi);

/// Tensor product of normalized single-qubit spinors.
PureState product_state(std::span<const Spinor> factors);

/// Spin-up-along-x CSS with Dicke phases exp(-i mu (k - N/2)^2), i.e.
/// exp(-i mu J_z^2) applied to coherent_spin_state(N, pi/2, 0).
SymmetricState one_axis_twisted_state(int num_qubits, double mu);

/// Dicke basis state with `k` qubits in |0>.
SymmetricState dicke_state(int num_qubits, int k);

PureState embed_symmetric(const SymmetricState& state);

DensityMatrix mix(std::span<const MixtureTerm> terms);

/// Terms of a random separable mixture: Haar-random pure qubit factors and
/// flat-Dirichlet weights, reproducible from `seed`.
Mixture random_separable_mixture(int num_qubits, int num_terms, std::uint64_t seed);
DensityMatrix random_separable_state(int num_qubits, int num_terms, std::uint64_t seed);

// Samplers used by the property suites.
Spinor random_spinor(std::mt19937_64& rng);
PureState random_pure_state(int num_qubits, std::mt19937_64& rng);
SymmetricState random_symmetric_state(int num_qubits, std::mt19937_64& rng);
/// Equal-weight mixture of `rank` random symmetric pure states.
DensityMatrix random_symmetric_mixed_state(int num_qubits, int rank, std::mt19937_64& rng);

/// |<a|b>| == 1 within `tolerance`, i.e. equal up to a global phase.
bool equal_up_to_phase(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tolerance);

}  // namespace spinsq
