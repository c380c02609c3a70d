#include "spinsq/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "spinsq/error.hpp"
#include "spinsq/operators.hpp"

namespace spinsq {
namespace {

constexpr double kSymmetryTolerance = 1e-8;
constexpr double kRouteTolerance = 1e-9;
constexpr double kWitnessMargin = 1e-9;

void require_two_qubits(const PureState& state, const char* what) {
  if (state.num_qubits() != 2) throw ValidationError(std::string(what) + ": expected a two-qubit state");
}

Complex determinant_term(const PureState& state) {
  const auto& a = state.amplitudes();
  return a[1] * a[2] - a[0] * a[3];
}

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

std::string format_value(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

SchmidtPair schmidt(const PureState& two_qubit) {
  require_two_qubits(two_qubit, "schmidt");
  const double d = std::abs(determinant_term(two_qubit));
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * d * d));
  SchmidtPair p;
  p.lambda1 = std::sqrt(std::max(0.0, 0.5 * (1.0 + root)));
  p.lambda2 = std::sqrt(std::max(0.0, 0.5 * (1.0 - root)));
  return p;
}

double concurrence_pure(const PureState& two_qubit) {
  require_two_qubits(two_qubit, "concurrence_pure");
  return std::min(1.0, 2.0 * std::abs(determinant_term(two_qubit)));
}

ConcurrenceXi xi_from_concurrence(double concurrence) {
  if (!(concurrence >= -1e-12 && concurrence <= 1.0 + 1e-12)) {
    throw ValidationError("concurrence must lie in [0, 1]");
  }
  const double c = std::clamp(concurrence, 0.0, 1.0);
  return {std::sqrt(1.0 - c), 1.0 / std::sqrt(1.0 + c)};
}

InvariantParts invariant_parts(const Marginals& marginals, int i, int j) {
  if (marginals.num_qubits() < 2) throw ValidationError("invariant_I: requires at least two qubits");
  if (!marginals.exchange_symmetric(kSymmetryTolerance)) {
    throw ValidationError("invariant_I: state is not exchange symmetric within 1e-8");
  }
  const Eigen::Vector3d s = marginals.bloch(i);
  Eigen::Matrix3d t = marginals.correlation(i, j);
  t = 0.5 * (t + t.transpose()).eval();

  InvariantParts out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const int e1 = levi_civita(a, b, c);
        if (e1 == 0) continue;
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
              const int e2 = levi_civita(l, m, n);
              if (e2 == 0) continue;
              out.direct += e1 * e2 * s[a] * s[l] * t(b, m) * t(c, n);
            }
      }

  out.s0 = s.norm();
  Eigen::Matrix2d perp = t.topLeftCorner<2, 2>();
  if (out.s0 > kZeroSpinTolerance) {
    const Eigen::Matrix3d o = su2_to_so3(alignment_unitary(s));
    perp = (o * t * o.transpose()).topLeftCorner<2, 2>();
  }
  const double t11 = perp(0, 0);
  const double t22 = perp(1, 1);
  const double t12 = 0.5 * (perp(0, 1) + perp(1, 0));
  const double root = std::sqrt((t11 - t22) * (t11 - t22) + 4.0 * t12 * t12);
  out.t_plus = 0.5 * ((t11 + t22) + root);
  out.t_minus = 0.5 * ((t11 + t22) - root);
  out.aligned = 2.0 * out.s0 * out.s0 * out.t_plus * out.t_minus;

  if (std::abs(out.direct - out.aligned) > kRouteTolerance) {
    throw ConsistencyError("invariant_I: contraction and aligned eigenvalue routes disagree (" +
                           format_value(out.direct) + " vs " + format_value(out.aligned) + ")");
  }
  return out;
}

double invariant_I(const Marginals& marginals, int i, int j) { return invariant_parts(marginals, i, j).direct; }
double invariant_I(const PureState& state, int i, int j) { return invariant_I(Marginals::of(state), i, j); }
double invariant_I(const DensityMatrix& state, int i, int j) { return invariant_I(Marginals::of(state), i, j); }
double invariant_I(const SymmetricState& state, int i, int j) { return invariant_I(Marginals::of(state), i, j); }
double invariant_I(const AnyState& state, int i, int j) { return invariant_I(Marginals::of(state), i, j); }

std::optional<IdentityCheck> verify_identity_imp1(const Marginals& marginals) {
  const auto parts = invariant_parts(marginals);
  if (parts.s0 <= kZeroSpinTolerance) return std::nullopt;
  const auto sym = xi_tilde_symmetric(marginals);
  const double xi1 = *sym.xi1_tilde;
  const int n = marginals.num_qubits();
  IdentityCheck check;
  check.lhs = parts.direct;
  check.rhs = 2.0 * parts.s0 * parts.s0 * parts.t_plus * (xi1 * xi1 - 1.0) / (n - 1);
  check.residual = std::abs(check.lhs - check.rhs);
  return check;
}

std::optional<IdentityCheck> verify_identity_imp1(const PureState& state) {
  return verify_identity_imp1(Marginals::of(state));
}
std::optional<IdentityCheck> verify_identity_imp1(const DensityMatrix& state) {
  return verify_identity_imp1(Marginals::of(state));
}
std::optional<IdentityCheck> verify_identity_imp1(const SymmetricState& state) {
  return verify_identity_imp1(Marginals::of(state));
}
std::optional<IdentityCheck> verify_identity_imp1(const AnyState& state) {
  return verify_identity_imp1(Marginals::of(state));
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Entangled:
      return "Entangled";
    case Verdict::PairwiseEntangled:
      return "PairwiseEntangled";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Unknown";
}

WitnessReport witness(const Marginals& marginals) {
  WitnessReport report;
  std::ostringstream details;

  const auto general = xi_tilde_general(marginals);
  report.xi2_tilde = general.xi2_tilde;
  if (general.xi2_tilde) {
    report.squeezing_witness = *general.xi2_tilde < 1.0 - kWitnessMargin;
    details << "xi2_tilde = " << format_value(*general.xi2_tilde);
  } else {
    details << "xi2_tilde undefined (" << to_string(*general.undefined_reason);
    if (general.zero_bloch_qubit) details << ", qubit " << *general.zero_bloch_qubit;
    details << ")";
  }

  if (marginals.num_qubits() >= 2 && marginals.exchange_symmetric(kSymmetryTolerance)) {
    report.invariant_I = invariant_I(marginals);
    report.pairwise_witness = *report.invariant_I < -kWitnessMargin;
    details << "; invariant I = " << format_value(*report.invariant_I);
  } else {
    details << "; invariant I not evaluated (state not exchange symmetric)";
  }

  if (report.pairwise_witness) {
    report.verdict = Verdict::PairwiseEntangled;
  } else if (report.squeezing_witness) {
    report.verdict = Verdict::Entangled;
  }
  report.details = details.str();
  return report;
}

WitnessReport witness(const PureState& state) { return witness(Marginals::of(state)); }
WitnessReport witness(const DensityMatrix& state) { return witness(Marginals::of(state)); }
WitnessReport witness(const SymmetricState& state) { return witness(Marginals::of(state)); }
WitnessReport witness(const AnyState& state) { return witness(Marginals::of(state)); }

}  // namespace spinsq
