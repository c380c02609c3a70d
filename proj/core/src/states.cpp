#include "spinsq/states.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spinsq/error.hpp"

namespace spinsq {
namespace {

void check_qubit_count(int num_qubits, int limit, const char* what) {
  if (num_qubits < 1) {
    throw ValidationError(std::string(what) + ": number of qubits must be positive");
  }
  if (num_qubits > limit) {
    throw CapacityError(std::string(what) + ": " + std::to_string(num_qubits) +
                        " qubits exceeds the limit of " + std::to_string(limit));
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

Eigen::VectorXcd normalized(Eigen::VectorXcd v) {
  v /= v.norm();
  return v;
}

}  // namespace

PureState::PureState(int num_qubits, Eigen::VectorXcd amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(num_qubits_, kMaxPureQubits, "PureState");
  if (amplitudes_.size() != (Eigen::Index{1} << num_qubits_)) {
    throw ValidationError("PureState: expected " + std::to_string(1L << num_qubits_) +
                          " amplitudes, got " + std::to_string(amplitudes_.size()));
  }
  if (!amplitudes_.allFinite()) throw ValidationError("PureState: non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
    throw ValidationError("PureState: amplitudes are not normalized");
  }
}

DensityMatrix::DensityMatrix(int num_qubits, Eigen::MatrixXcd matrix)
    : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
  check_qubit_count(num_qubits_, kMaxDensityQubits, "DensityMatrix");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits_;
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw ValidationError("DensityMatrix: expected a " + std::to_string(dim) + "x" +
                          std::to_string(dim) + " matrix");
  }
  if (!matrix_.allFinite()) throw ValidationError("DensityMatrix: non-finite entry");
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw ValidationError("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > kNormTolerance) {
    throw ValidationError("DensityMatrix: trace is not 1");
  }
  const Eigen::MatrixXcd hermitian = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw ValidationError("DensityMatrix: matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
  if (state.num_qubits() > kMaxDensityQubits) {
    throw CapacityError("DensityMatrix: pure state too large for a density matrix");
  }
  const auto& psi = state.amplitudes();
  return DensityMatrix(state.num_qubits(), psi * psi.adjoint());
}

SymmetricState::SymmetricState(int num_qubits, Eigen::VectorXcd dicke_amplitudes)
    : num_qubits_(num_qubits), dicke_amplitudes_(std::move(dicke_amplitudes)) {
  check_qubit_count(num_qubits_, kMaxSymmetricQubits, "SymmetricState");
  if (dicke_amplitudes_.size() != num_qubits_ + 1) {
    throw ValidationError("SymmetricState: expected " + std::to_string(num_qubits_ + 1) +
                          " Dicke amplitudes, got " + std::to_string(dicke_amplitudes_.size()));
  }
  if (!dicke_amplitudes_.allFinite()) throw ValidationError("SymmetricState: non-finite amplitude");
  if (std::abs(dicke_amplitudes_.norm() - 1.0) > kNormTolerance) {
    throw ValidationError("SymmetricState: amplitudes are not normalized");
  }
}

int num_qubits(const AnyState& state) {
  return std::visit([](const auto& s) { return s.num_qubits(); }, state);
}

void validate_qubit_density(const Eigen::Matrix2cd& rho) {
  if (!rho.allFinite()) throw ValidationError("qubit density matrix has a non-finite entry");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw ValidationError("qubit density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > kNormTolerance) {
    throw ValidationError("qubit density matrix does not have unit trace");
  }
  // For a Hermitian unit-trace 2x2 matrix positivity is det >= 0.
  const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  if (det < kEigenvalueFloor) throw ValidationError("qubit density matrix is not positive");
}

SymmetricState coherent_spin_state(int num_qubits, double theta, double phi) {
  check_qubit_count(num_qubits, kMaxSymmetricQubits, "coherent_spin_state");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(num_qubits + 1);
  for (int k = 0; k <= num_qubits; ++k) {
    const int n_cos = num_qubits - k;
    // Exact zeros avoid 0 * log(0) in the log-space evaluation below.
    if ((n_cos > 0 && c == 0.0) || (k > 0 && s == 0.0)) continue;
    double log_mag = 0.5 * log_binomial(num_qubits, k);
    double sign = 1.0;
    if (n_cos > 0) {
      log_mag += n_cos * std::log(std::abs(c));
      if (c < 0 && n_cos % 2 == 1) sign = -sign;
    }
    if (k > 0) {
      log_mag += k * std::log(std::abs(s));
      if (s < 0 && k % 2 == 1) sign = -sign;
    }
    amps[k] = sign * std::exp(log_mag) * std::polar(1.0, k * phi);
  }
  return SymmetricState(num_qubits, normalized(std::move(amps)));
}

PureState product_state(std::span<const Spinor> factors) {
  if (factors.empty()) throw ValidationError("product_state: no factors");
  check_qubit_count(static_cast<int>(factors.size()), kMaxPureQubits, "product_state");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (std::size_t q = 0; q < factors.size(); ++q) {
    const Spinor& f = factors[q];
    if (!f.allFinite() || std::abs(f.norm() - 1.0) > kNormTolerance) {
      throw ValidationError("product_state: factor " + std::to_string(q) + " is not normalized");
    }
    Eigen::VectorXcd next(psi.size() * 2);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      next[2 * i] = psi[i] * f[0];
      next[2 * i + 1] = psi[i] * f[1];
    }
    psi = std::move(next);
  }
  return PureState(static_cast<int>(factors.size()), std::move(psi));
}

SymmetricState one_axis_twisted_state(int num_qubits, double mu) {
  if (num_qubits < 2) throw ValidationError("one_axis_twisted_state: requires N >= 2");
  const SymmetricState css = coherent_spin_state(num_qubits, std::numbers::pi / 2.0, 0.0);
  if (mu == 0.0) return css;
  Eigen::VectorXcd amps = css.dicke_amplitudes();
  const double j = num_qubits / 2.0;
  for (int k = 0; k <= num_qubits; ++k) {
    const double m = k - j;
    amps[k] *= std::polar(1.0, -mu * m * m);
  }
  return SymmetricState(num_qubits, normalized(std::move(amps)));
}

SymmetricState dicke_state(int num_qubits, int k) {
  check_qubit_count(num_qubits, kMaxSymmetricQubits, "dicke_state");
  if (k < 0 || k > num_qubits) throw ValidationError("dicke_state: k out of range");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(num_qubits + 1);
  amps[k] = 1.0;
  return SymmetricState(num_qubits, std::move(amps));
}

PureState embed_symmetric(const SymmetricState& state) {
  const int n = state.num_qubits();
  if (n > kMaxPureQubits) {
    throw CapacityError("embed_symmetric: " + std::to_string(n) +
                        " qubits exceeds the full-vector limit of " +
                        std::to_string(kMaxPureQubits));
  }
  const auto& dicke = state.dicke_amplitudes();
  Eigen::VectorXd scale(n + 1);
  for (int k = 0; k <= n; ++k) scale[k] = std::exp(-0.5 * log_binomial(n, k));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd psi(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    const int zeros = n - std::popcount(static_cast<std::uint64_t>(idx));
    psi[idx] = dicke[zeros] * scale[zeros];
  }
  return PureState(n, normalized(std::move(psi)));
}

DensityMatrix mix(std::span<const MixtureTerm> terms) {
  if (terms.empty()) throw ValidationError("mix: no terms");
  const std::size_t n = terms.front().factors.size();
  if (n == 0) throw ValidationError("mix: term without factors");
  check_qubit_count(static_cast<int>(n), kMaxDensityQubits, "mix");
  double total = 0.0;
  for (const auto& term : terms) {
    if (term.factors.size() != n) throw ValidationError("mix: terms disagree on the qubit count");
    if (!(term.weight >= 0.0 && term.weight <= 1.0)) {
      throw ValidationError("mix: weight outside [0, 1]");
    }
    for (const auto& f : term.factors) validate_qubit_density(f);
    total += term.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("mix: weights do not sum to 1");

  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : terms) {
    Eigen::MatrixXcd product = Eigen::MatrixXcd::Ones(1, 1);
    for (const auto& f : term.factors) {
      Eigen::MatrixXcd next(product.rows() * 2, product.cols() * 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          next(Eigen::seqN(a, product.rows(), 2), Eigen::seqN(b, product.cols(), 2)) =
              product * f(a, b);
      product = std::move(next);
    }
    rho += term.weight * product;
  }
  rho /= total;
  return DensityMatrix(static_cast<int>(n), std::move(rho));
}

Spinor random_spinor(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Spinor v;
  do {
    v = Spinor(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

Mixture random_separable_mixture(int num_qubits, int num_terms, std::uint64_t seed) {
  if (num_qubits < 1) throw ValidationError("random_separable_state: requires N >= 1");
  if (num_terms < 1) throw ValidationError("random_separable_state: requires at least one term");
  check_qubit_count(num_qubits, kMaxDensityQubits, "random_separable_state");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  Mixture terms(static_cast<std::size_t>(num_terms));
  double total = 0.0;
  for (auto& term : terms) {
    term.weight = expo(rng);
    total += term.weight;
    term.factors.reserve(static_cast<std::size_t>(num_qubits));
    for (int q = 0; q < num_qubits; ++q) {
      const Spinor v = random_spinor(rng);
      term.factors.push_back(v * v.adjoint());
    }
  }
  for (auto& term : terms) term.weight /= total;
  return terms;
}

DensityMatrix random_separable_state(int num_qubits, int num_terms, std::uint64_t seed) {
  const Mixture terms = random_separable_mixture(num_qubits, num_terms, seed);
  return mix(terms);
}

PureState random_pure_state(int num_qubits, std::mt19937_64& rng) {
  check_qubit_count(num_qubits, kMaxPureQubits, "random_pure_state");
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(Eigen::Index{1} << num_qubits);
  for (auto& a : v) a = Complex(gauss(rng), gauss(rng));
  return PureState(num_qubits, normalized(std::move(v)));
}

SymmetricState random_symmetric_state(int num_qubits, std::mt19937_64& rng) {
  check_qubit_count(num_qubits, kMaxSymmetricQubits, "random_symmetric_state");
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(num_qubits + 1);
  for (auto& a : v) a = Complex(gauss(rng), gauss(rng));
  return SymmetricState(num_qubits, normalized(std::move(v)));
}

DensityMatrix random_symmetric_mixed_state(int num_qubits, int rank, std::mt19937_64& rng) {
  check_qubit_count(num_qubits, kMaxDensityQubits, "random_symmetric_mixed_state");
  if (rank < 1) throw ValidationError("random_symmetric_mixed_state: rank must be positive");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int r = 0; r < rank; ++r) {
    const auto psi = embed_symmetric(random_symmetric_state(num_qubits, rng)).amplitudes();
    rho += psi * psi.adjoint() / static_cast<double>(rank);
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(num_qubits, std::move(rho));
}

bool equal_up_to_phase(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tolerance) {
  if (a.size() != b.size()) return false;
  const Complex overlap = a.dot(b);
  if (std::abs(overlap) < std::numeric_limits<double>::min()) return a.norm() + b.norm() == 0.0;
  const Complex phase = overlap / std::abs(overlap);
  return (a * phase - b).cwiseAbs().maxCoeff() <= tolerance;
}

}  // namespace spinsq
