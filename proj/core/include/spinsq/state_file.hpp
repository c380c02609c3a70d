#pragma once

// Versioned JSON document holding one state.
//
//   {"format_version": "1", "kind": "pure" | "density" | "symmetric" | "mixture",
//    "num_qubits": N, "payload": ...}
//
// Complex numbers are [re, im] pairs. The payload is the amplitude list
// (pure), the list of matrix rows (density), the Dicke amplitude list
// (symmetric) or a list of {"weight": p, "factors": [2x2 matrix, ...]} terms
// (mixture).

#include <optional>
#include <string>
#include <string_view>

#include "spinsq/states.hpp"

namespace spinsq {

enum class StateKind { Pure, Density, Symmetric, Mixture };

std::string_view to_string(StateKind kind);

class StateFile {
 public:
  explicit StateFile(PureState state);
  explicit StateFile(DensityMatrix state);
  explicit StateFile(SymmetricState state);
  /// Validates the terms and keeps them for serialization.
  StateFile(int num_qubits, Mixture terms);

  /// Throws ValidationError naming the offending field.
  static StateFile parse(std::string_view text);

  StateKind kind() const noexcept { return kind_; }
  int num_qubits() const noexcept { return spinsq::num_qubits(state_); }
  /// Mixtures are expanded into their density matrix.
  const AnyState& state() const noexcept { return state_; }
  const std::optional<Mixture>& mixture() const noexcept { return mixture_; }

  /// Compact document terminated by a newline.
  std::string serialize() const;

 private:
  StateKind kind_;
  AnyState state_;
  std::optional<Mixture> mixture_;
};

}  // namespace spinsq
