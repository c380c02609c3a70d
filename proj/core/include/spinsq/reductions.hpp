#pragma once

// Reduced density matrices, Bloch vectors and two-qubit correlation matrices.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinsq/states.hpp"

namespace spinsq {

/// T_ab = <sigma_{i a} sigma_{j b}> for one ordered qubit pair.
struct CorrelationMatrix {
  CorrelationMatrix() = default;
  /// Throws ValidationError if an entry lies outside [-1, 1] by more than 1e-10.
  explicit CorrelationMatrix(const Eigen::Matrix3d& entries);

  Eigen::Matrix3d entries = Eigen::Matrix3d::Zero();
};

/// Symmetrized sum of pair correlation matrices, S = (T + T^T)/2.
struct AggregateS {
  Eigen::Matrix3d entries = Eigen::Matrix3d::Zero();
};

/// One- and two-body marginal data of an N-qubit state: every Bloch vector
/// and every pair correlation matrix. Exchange-symmetric states are stored
/// compactly as a single Bloch vector and a single pair matrix.
class Marginals {
 public:
  /// `pairs` holds T^(ij) for i < j in lexicographic order.
  Marginals(std::vector<Eigen::Vector3d> bloch, std::vector<Eigen::Matrix3d> pairs);
  static Marginals uniform(int num_qubits, const Eigen::Vector3d& bloch, const Eigen::Matrix3d& pair);

  static Marginals of(const PureState& state);
  static Marginals of(const DensityMatrix& state);
  static Marginals of(const SymmetricState& state);
  static Marginals of(const AnyState& state);

  int num_qubits() const noexcept { return num_qubits_; }
  bool is_uniform() const noexcept { return uniform_; }

  const Eigen::Vector3d& bloch(int qubit) const;
  /// T^(ij); T^(ji) = (T^(ij))^T.
  Eigen::Matrix3d correlation(int i, int j) const;

  /// Applies a per-qubit SO(3) rotation: s_i -> O_i s_i, T^(ij) -> O_i T^(ij) O_j^T.
  Marginals rotated(std::span<const Eigen::Matrix3d> per_qubit) const;
  /// Same rotation on every qubit; keeps compact storage.
  Marginals rotated_uniformly(const Eigen::Matrix3d& rotation) const;

  /// <J> = (1/2) sum_i s_i.
  Eigen::Vector3d mean_spin() const;
  /// Symmetrized covariance matrix of (J_x, J_y, J_z).
  Eigen::Matrix3d collective_covariance() const;

  /// Exchange symmetry at the pair level: equal Bloch vectors, equal and
  /// symmetric pair matrices, within `tolerance`.
  bool exchange_symmetric(double tolerance = 1e-8) const;

 private:
  Marginals() = default;
  std::size_t pair_index(int i, int j) const;

  int num_qubits_ = 0;
  bool uniform_ = false;
  std::vector<Eigen::Vector3d> bloch_;
  std::vector<Eigen::Matrix3d> pairs_;
};

/// Partial trace onto `subset` (0-based qubit indices, first index most significant).
DensityMatrix reduce(const PureState& state, std::span<const int> subset);
DensityMatrix reduce(const DensityMatrix& state, std::span<const int> subset);
DensityMatrix reduce(const SymmetricState& state, std::span<const int> subset);
DensityMatrix reduce(const AnyState& state, std::span<const int> subset);

/// Correlation matrix of a two-qubit density matrix.
Eigen::Matrix3d pair_correlations(const DensityMatrix& two_qubit);

CorrelationMatrix correlation_matrix(const PureState& state, int i, int j);
CorrelationMatrix correlation_matrix(const DensityMatrix& state, int i, int j);
CorrelationMatrix correlation_matrix(const SymmetricState& state, int i, int j);
CorrelationMatrix correlation_matrix(const AnyState& state, int i, int j);

/// S = sym(sum_{i<j} T^(ij)). Requires N >= 2.
AggregateS aggregate_S(const Marginals& marginals);
template <class State>
AggregateS aggregate_S(const State& state) {
  return aggregate_S(Marginals::of(state));
}

/// T_ab = (2<{J_a, J_b}> - N delta_ab) / (N (N - 1)), evaluated in the Dicke basis.
CorrelationMatrix collective_to_pair_correlations(const SymmetricState& state);

}  // namespace spinsq
