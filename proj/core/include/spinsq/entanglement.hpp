#pragma once

// Two-qubit Schmidt data and concurrence, the local invariant I of
// exchange-symmetric states, and entanglement witnesses.

#include <optional>
#include <string>
#include <string_view>

#include "spinsq/reductions.hpp"
#include "spinsq/squeezing.hpp"
#include "spinsq/states.hpp"

namespace spinsq {

struct SchmidtPair {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
};

/// Schmidt coefficients lambda1 >= lambda2 of a two-qubit pure state.
SchmidtPair schmidt(const PureState& two_qubit);

/// C = 2 |beta gamma - alpha delta| for amplitudes (alpha, beta, gamma, delta).
double concurrence_pure(const PureState& two_qubit);

struct ConcurrenceXi {
  double xi1_tilde = 1.0;
  double xi2_tilde = 1.0;
};

/// (sqrt(1 - C), 1 / sqrt(1 + C)). Throws ValidationError outside [0, 1].
ConcurrenceXi xi_from_concurrence(double concurrence);

/// Both evaluation routes of I = eps_ijk eps_lmn s_i s_l t_jm t_kn.
struct InvariantParts {
  double direct = 0.0;   ///< Levi-Civita contraction in the original frame.
  double aligned = 0.0;  ///< 2 s0^2 t+ t- after aligning s to +z.
  double s0 = 0.0;
  double t_plus = 0.0;
  double t_minus = 0.0;
};

/// Throws ValidationError for non-symmetric input and ConsistencyError when
/// the two routes differ by more than 1e-9.
InvariantParts invariant_parts(const Marginals& marginals, int i = 0, int j = 1);

double invariant_I(const Marginals& marginals, int i = 0, int j = 1);
double invariant_I(const PureState& state, int i = 0, int j = 1);
double invariant_I(const DensityMatrix& state, int i = 0, int j = 1);
double invariant_I(const SymmetricState& state, int i = 0, int j = 1);
double invariant_I(const AnyState& state, int i = 0, int j = 1);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// I against 2 s0^2 t+ (xi~1^2 - 1)/(N - 1). Empty when s0 <= 1e-10.
std::optional<IdentityCheck> verify_identity_imp1(const Marginals& marginals);
std::optional<IdentityCheck> verify_identity_imp1(const PureState& state);
std::optional<IdentityCheck> verify_identity_imp1(const DensityMatrix& state);
std::optional<IdentityCheck> verify_identity_imp1(const SymmetricState& state);
std::optional<IdentityCheck> verify_identity_imp1(const AnyState& state);

enum class Verdict { Entangled, PairwiseEntangled, Inconclusive };

std::string_view to_string(Verdict verdict);

struct WitnessReport {
  std::optional<double> xi2_tilde;
  std::optional<double> invariant_I;
  /// PairwiseEntangled when I < -1e-9 on a symmetric state, otherwise
  /// Entangled when xi~2 < 1 - 1e-9, otherwise Inconclusive.
  Verdict verdict = Verdict::Inconclusive;
  bool squeezing_witness = false;  ///< xi~2 < 1 - 1e-9
  bool pairwise_witness = false;   ///< I < -1e-9 on a symmetric state
  std::string details;
};

WitnessReport witness(const Marginals& marginals);
WitnessReport witness(const PureState& state);
WitnessReport witness(const DensityMatrix& state);
WitnessReport witness(const SymmetricState& state);
WitnessReport witness(const AnyState& state);

}  // namespace spinsq
