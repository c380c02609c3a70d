#pragma once

// Pauli and collective angular-momentum expectations, per-qubit frames and
// local unitaries.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinsq/states.hpp"

namespace spinsq {

/// Tolerance below which |<J>| (or a Bloch vector) is treated as zero.
inline constexpr double kZeroSpinTolerance = 1e-10;

/// Unit 3-vector.
class Direction {
 public:
  /// Throws ValidationError unless |v| = 1 within 1e-12.
  explicit Direction(const Eigen::Vector3d& v);
  /// Normalizes `v`; throws ValidationError when |v| is zero.
  static Direction normalize(const Eigen::Vector3d& v);

  const Eigen::Vector3d& vector() const noexcept { return v_; }
  double operator[](int i) const { return v_[i]; }

 private:
  Eigen::Vector3d v_;
};

/// Right-handed orthonormal triad (n_perp, n_perp_prime, n0).
class Frame {
 public:
  Frame(Direction n_perp, Direction n_perp_prime, Direction n0);

  const Direction& n_perp() const noexcept { return n_perp_; }
  const Direction& n_perp_prime() const noexcept { return n_perp_prime_; }
  const Direction& n0() const noexcept { return n0_; }

 private:
  Direction n_perp_;
  Direction n_perp_prime_;
  Direction n0_;
};

/// U_1 (x) ... (x) U_N.
class LocalUnitary {
 public:
  explicit LocalUnitary(std::vector<Eigen::Matrix2cd> per_qubit);
  static LocalUnitary identity(int num_qubits);

  int num_qubits() const noexcept { return static_cast<int>(per_qubit_.size()); }
  const Eigen::Matrix2cd& operator[](int qubit) const { return per_qubit_.at(qubit); }
  const std::vector<Eigen::Matrix2cd>& per_qubit() const noexcept { return per_qubit_; }

 private:
  std::vector<Eigen::Matrix2cd> per_qubit_;
};

/// sigma_x, sigma_y, sigma_z for axis 0, 1, 2.
const Eigen::Matrix2cd& pauli(int axis);

/// sigma . n for a real 3-vector n.
Eigen::Matrix2cd pauli_dot(const Eigen::Vector3d& n);

/// exp(-i angle/2 sigma . axis), the spin-1/2 rotation by `angle` about `axis`.
Eigen::Matrix2cd rotation_unitary(const Eigen::Vector3d& axis, double angle);

/// Haar-random element of SU(2).
Eigen::Matrix2cd random_unitary(std::mt19937_64& rng);
LocalUnitary random_local_unitary(int num_qubits, std::mt19937_64& rng);

PureState apply_local_unitaries(const PureState& state, const LocalUnitary& u);
DensityMatrix apply_local_unitaries(const DensityMatrix& state, const LocalUnitary& u);

/// O_ab = Tr(sigma_a u sigma_b u^dagger) / 2. Throws ValidationError for non-unitary u.
Eigen::Matrix3d su2_to_so3(const Eigen::Matrix2cd& u);

/// Smallest rotation taking `bloch` to +z (rotation about x by pi when
/// `bloch` points along -z). `bloch` must be nonzero.
Eigen::Matrix2cd alignment_unitary(const Eigen::Vector3d& bloch);

/// (<sigma_x>, <sigma_y>, <sigma_z>) of qubit `qubit` (0-based).
Eigen::Vector3d bloch_expectations(const PureState& state, int qubit);
Eigen::Vector3d bloch_expectations(const DensityMatrix& state, int qubit);
Eigen::Vector3d bloch_expectations(const SymmetricState& state, int qubit);
Eigen::Vector3d bloch_expectations(const AnyState& state, int qubit);

/// <J> with J = (1/2) sum_i sigma_i.
Eigen::Vector3d mean_spin(const PureState& state);
Eigen::Vector3d mean_spin(const DensityMatrix& state);
Eigen::Vector3d mean_spin(const SymmetricState& state);
Eigen::Vector3d mean_spin(const AnyState& state);

/// <J>/|<J>|; throws MeanSpinZero when |<J>| <= 1e-10.
template <class State>
Direction mean_spin_direction(const State& state);

/// Symmetrized covariance matrix of (J_x, J_y, J_z).
Eigen::Matrix3d collective_covariance(const PureState& state);
Eigen::Matrix3d collective_covariance(const DensityMatrix& state);
Eigen::Matrix3d collective_covariance(const SymmetricState& state);
Eigen::Matrix3d collective_covariance(const AnyState& state);

/// Deterministic frame around n0: n_perp = normalize(z x n0), or x when n0 is
/// (anti)parallel to z; n_perp_prime = n0 x n_perp.
Frame complete_frame(const Direction& n0);

struct CollectiveMoment {
  double mean_J0 = 0.0;
  /// Symmetrized covariance of (J_perp, J'_perp).
  Eigen::Matrix2d var_perp = Eigen::Matrix2d::Zero();
};

/// Moments of J_perp = (1/2) sum_i sigma_i . n_i_perp and its partners,
/// evaluated by applying the operators to the state.
CollectiveMoment collective_moment(const PureState& state, std::span<const Frame> frames);
CollectiveMoment collective_moment(const DensityMatrix& state, std::span<const Frame> frames);
CollectiveMoment collective_moment(const SymmetricState& state, std::span<const Frame> frames);
CollectiveMoment collective_moment(const AnyState& state, std::span<const Frame> frames);

namespace detail {

/// Applies `op` to qubit `qubit` of an N-qubit vector, in place.
void apply_qubit_op(Eigen::Ref<Eigen::VectorXcd> vec, int num_qubits, int qubit,
                    const Eigen::Matrix2cd& op);

/// Applies `op` to qubit `qubit` on the row index of `mat` (left multiplication).
void apply_qubit_op_rows(Eigen::MatrixXcd& mat, int num_qubits, int qubit,
                         const Eigen::Matrix2cd& op);

}  // namespace detail

extern template Direction mean_spin_direction(const PureState&);
extern template Direction mean_spin_direction(const DensityMatrix&);
extern template Direction mean_spin_direction(const SymmetricState&);
extern template Direction mean_spin_direction(const AnyState&);

}  // namespace spinsq
