#pragma once

#include <stdexcept>
#include <string>

namespace spinsq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a type invariant or an operation precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The requested representation would exceed a storage guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// |<J>| is below the zero-mean-spin tolerance, so no mean spin direction exists.
class MeanSpinZero : public Error {
 public:
  MeanSpinZero() : Error("mean spin is zero; no mean spin direction exists") {}
};

/// A qubit has a vanishing Bloch vector, so its local frame is undefined.
class QubitBlochZero : public Error {
 public:
  explicit QubitBlochZero(int qubit)
      : Error("Bloch vector of qubit " + std::to_string(qubit) + " is zero"), qubit_(qubit) {}
  int qubit() const noexcept { return qubit_; }

 private:
  int qubit_;
};

/// Two independent computation routes disagreed beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinsq
