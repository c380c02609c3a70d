#pragma once

// Full analysis of one state and its text / JSON renderings.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spinsq/entanglement.hpp"
#include "spinsq/squeezing.hpp"
#include "spinsq/state_file.hpp"

namespace spinsq {

std::string_view library_version();

/// 64-bit FNV-1a digest of `bytes`, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

struct PairCorrelation {
  int i = 0;
  int j = 1;
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
};

struct OracleCheck {
  std::optional<double> brute_force_min_variance;
  /// |brute force - locally invariant min_variance|.
  std::optional<double> residual;
  std::string skipped_reason;
};

struct TwoQubitPure {
  SchmidtPair schmidt;
  double concurrence = 0.0;
  ConcurrenceXi from_concurrence;
};

struct Analysis {
  std::string input_digest;
  StateKind kind = StateKind::Pure;
  int num_qubits = 0;
  bool exchange_symmetric = false;

  SqueezingResult standard;
  SqueezingResult local_invariant;
  std::optional<double> aligned_only_min;
  std::optional<double> optimized_min;
  std::optional<SqueezingResult> symmetric;
  WitnessReport witness;
  std::optional<InvariantParts> invariant;
  std::optional<IdentityCheck> identity;

  /// One entry per qubit, or a single shared entry when `uniform_marginals`.
  bool uniform_marginals = false;
  std::vector<Eigen::Vector3d> bloch_vectors;
  std::vector<PairCorrelation> pair_correlations;

  OracleCheck oracle;
  std::optional<TwoQubitPure> two_qubit;
};

struct AnalysisOptions {
  /// The brute-force oracle runs up to this many qubits.
  int oracle_max_qubits = 6;
  int oracle_resolution = 128;
  std::uint64_t seed = 1;
};

/// `input_bytes` is only digested.
Analysis analyze(const StateFile& file, std::string_view input_bytes, const AnalysisOptions& options = {});

/// Deterministic JSON document; undefined values are null with a reason.
std::string to_json(const Analysis& analysis);
/// Human-readable summary.
std::string to_text(const Analysis& analysis);

}  // namespace spinsq
