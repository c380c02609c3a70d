#pragma once

// Spin-squeezing parameters: xi_1 / xi_2 in the collective mean-spin frame and
// the locally invariant xi~_1 / xi~_2 built from per-qubit frames.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spinsq/operators.hpp"
#include "spinsq/reductions.hpp"
#include "spinsq/states.hpp"

namespace spinsq {

enum class UndefinedReason { MeanSpinZero, QubitBlochZero };

std::string_view to_string(UndefinedReason reason);

struct SqueezingResult {
  std::optional<double> xi1;
  std::optional<double> xi2;
  std::optional<double> xi1_tilde;
  std::optional<double> xi2_tilde;
  /// Minimal perpendicular variance; absent when no frame exists.
  std::optional<double> min_variance;
  /// Angle of the minimizing direction from the first perpendicular axis, in [0, pi).
  double optimal_angle = 0.0;
  double mean_J0 = 0.0;
  std::optional<UndefinedReason> undefined_reason;
  /// Offending qubit when the reason is QubitBlochZero and one qubit is at fault.
  std::optional<int> zero_bloch_qubit;
};

struct QuadraticMin {
  double value = 0.0;
  Direction direction{Eigen::Vector3d::UnitX()};
  double angle = 0.0;
};

/// Minimum of n^T M n over unit n perpendicular to n0, in the frame
/// complete_frame(n0). Degenerate 2x2 blocks report angle 0.
QuadraticMin quadratic_form_min(const Eigen::Matrix3d& m, const Direction& n0);

SqueezingResult xi_standard(const PureState& state);
SqueezingResult xi_standard(const DensityMatrix& state);
SqueezingResult xi_standard(const SymmetricState& state);
SqueezingResult xi_standard(const AnyState& state);

/// Closed form for exchange-symmetric states from the common Bloch vector and
/// pair matrix. Throws ValidationError for non-symmetric marginals. With a
/// vanishing Bloch vector xi1_tilde minimizes over all directions and
/// xi2_tilde is undefined.
SqueezingResult xi_tilde_symmetric(const Marginals& marginals);
SqueezingResult xi_tilde_symmetric(const PureState& state);
SqueezingResult xi_tilde_symmetric(const DensityMatrix& state);
SqueezingResult xi_tilde_symmetric(const SymmetricState& state);
SqueezingResult xi_tilde_symmetric(const AnyState& state);

/// Per-qubit alignment data behind xi_tilde_general.
struct CommonOrientation {
  /// Minimal-angle rotations taking each Bloch vector to +z.
  std::vector<Eigen::Matrix3d> alignment;
  /// Alignment followed by the in-plane rotation taking each optimal n_i_perp to +x.
  std::vector<Eigen::Matrix3d> rotations;
  /// S of the fully rotated state.
  AggregateS s;
  /// min over n_perp of n_perp^T S n_perp with only the minimal-angle alignment applied.
  double aligned_only_min = 0.0;
  /// min over independent per-qubit perpendicular directions of sum_{i<j} n_i^T T^(ij) n_j.
  double optimized_min = 0.0;
};

/// Throws QubitBlochZero when a Bloch vector is below 1e-10.
CommonOrientation common_orientation(const Marginals& marginals);

SqueezingResult xi_tilde_general(const Marginals& marginals);
SqueezingResult xi_tilde_general(const PureState& state);
SqueezingResult xi_tilde_general(const DensityMatrix& state);
SqueezingResult xi_tilde_general(const SymmetricState& state);
SqueezingResult xi_tilde_general(const AnyState& state);

/// Var(J_perp) minimized over independent per-qubit perpendicular angles by
/// coordinate descent, each qubit's perpendicular plane taken from
/// complete_frame(frames_n0[i]). Requires angular_resolution >= 64.
double brute_force_min_variance(const PureState& state, std::span<const Direction> frames_n0,
                                int angular_resolution, std::uint64_t seed = 1);
double brute_force_min_variance(const DensityMatrix& state, std::span<const Direction> frames_n0,
                                int angular_resolution, std::uint64_t seed = 1);
double brute_force_min_variance(const SymmetricState& state, std::span<const Direction> frames_n0,
                                int angular_resolution, std::uint64_t seed = 1);
double brute_force_min_variance(const AnyState& state, std::span<const Direction> frames_n0,
                                int angular_resolution, std::uint64_t seed = 1);

/// Each qubit's Bloch direction; throws QubitBlochZero for a vanishing one.
std::vector<Direction> bloch_directions(const Marginals& marginals);

}  // namespace spinsq
