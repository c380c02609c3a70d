#include "spinsq/operators.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dicke.hpp"
#include "spinsq/error.hpp"
#include "spinsq/reductions.hpp"

namespace spinsq {
namespace {

constexpr double kUnitTolerance = 1e-12;

bool is_unitary(const Eigen::Matrix2cd& u) {
  return u.allFinite() &&
         (u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= kUnitTolerance;
}

void check_qubit(int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw ValidationError("qubit index " + std::to_string(qubit) + " out of range for " +
                          std::to_string(num_qubits) + " qubits");
  }
}

void check_frame_count(std::size_t frames, int num_qubits) {
  if (static_cast<int>(frames) != num_qubits) {
    throw ValidationError("expected " + std::to_string(num_qubits) + " frames, got " +
                          std::to_string(frames));
  }
}

Eigen::Index stride_of(int num_qubits, int qubit) { return Eigen::Index{1} << (num_qubits - 1 - qubit); }

// Bloch vector from the single-qubit coherence rho_00 - rho_11 and rho_01.
Eigen::Vector3d bloch_from(double z, Complex rho01) {
  return {2.0 * rho01.real(), -2.0 * rho01.imag(), z};
}

// (1/2) sum_i sigma_i . d_i applied to a pure state.
Eigen::VectorXcd apply_half_sum(const Eigen::VectorXcd& psi, int n, const std::vector<Eigen::Vector3d>& dirs) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (int q = 0; q < n; ++q) {
    Eigen::VectorXcd term = psi;
    detail::apply_qubit_op(term, n, q, pauli_dot(dirs[static_cast<std::size_t>(q)]));
    out += term;
  }
  return 0.5 * out;
}

Eigen::MatrixXcd apply_half_sum_rows(const Eigen::MatrixXcd& m, int n, const std::vector<Eigen::Vector3d>& dirs) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (int q = 0; q < n; ++q) {
    Eigen::MatrixXcd term = m;
    detail::apply_qubit_op_rows(term, n, q, pauli_dot(dirs[static_cast<std::size_t>(q)]));
    out += term;
  }
  return 0.5 * out;
}

struct FrameAxes {
  std::vector<Eigen::Vector3d> perp, perp_prime, zero;
};

FrameAxes axes_of(std::span<const Frame> frames) {
  FrameAxes axes;
  for (const auto& f : frames) {
    axes.perp.push_back(f.n_perp().vector());
    axes.perp_prime.push_back(f.n_perp_prime().vector());
    axes.zero.push_back(f.n0().vector());
  }
  return axes;
}

// Covariance from marginals: <A B>_sym = (1/4)[sum_i a_i.b_i + sum_{i != j} a_i^T T^(ij) b_j].
CollectiveMoment moment_from_marginals(const Marginals& marg, const FrameAxes& axes) {
  const int n = marg.num_qubits();
  const std::vector<Eigen::Vector3d>* dirs[2] = {&axes.perp, &axes.perp_prime};
  CollectiveMoment out;
  Eigen::Vector2d means = Eigen::Vector2d::Zero();
  for (int q = 0; q < n; ++q) {
    const auto& s = marg.bloch(q);
    out.mean_J0 += 0.5 * axes.zero[static_cast<std::size_t>(q)].dot(s);
    for (int a = 0; a < 2; ++a) means[a] += 0.5 * (*dirs[a])[static_cast<std::size_t>(q)].dot(s);
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = a; b < 2; ++b) {
      const auto& da = *dirs[a];
      const auto& db = *dirs[b];
      double second = 0.0;
      if (marg.is_uniform() && n >= 2) {
        // One symmetric T for every pair: the double sum factorizes.
        const Eigen::Matrix3d t = marg.correlation(0, 1);
        Eigen::Vector3d sum_a = Eigen::Vector3d::Zero();
        Eigen::Vector3d sum_b = Eigen::Vector3d::Zero();
        double diagonal = 0.0;
        for (int q = 0; q < n; ++q) {
          const auto& x = da[static_cast<std::size_t>(q)];
          const auto& y = db[static_cast<std::size_t>(q)];
          sum_a += x;
          sum_b += y;
          second += x.dot(y);
          diagonal += x.dot(t * y);
        }
        second += sum_a.dot(t * sum_b) - diagonal;
      } else {
        for (int i = 0; i < n; ++i) {
          second += da[static_cast<std::size_t>(i)].dot(db[static_cast<std::size_t>(i)]);
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            second += da[static_cast<std::size_t>(i)].dot(marg.correlation(i, j) * db[static_cast<std::size_t>(j)]);
          }
        }
      }
      out.var_perp(a, b) = 0.25 * second - means[a] * means[b];
      out.var_perp(b, a) = out.var_perp(a, b);
    }
  }
  return out;
}

}  // namespace

Direction::Direction(const Eigen::Vector3d& v) : v_(v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTolerance) {
    throw ValidationError("direction is not a unit vector");
  }
}

Direction Direction::normalize(const Eigen::Vector3d& v) {
  const double norm = v.norm();
  if (!std::isfinite(norm) || norm == 0.0) throw ValidationError("cannot normalize a zero vector");
  return Direction(v / norm);
}

Frame::Frame(Direction n_perp, Direction n_perp_prime, Direction n0)
    : n_perp_(n_perp), n_perp_prime_(n_perp_prime), n0_(n0) {
  const auto& a = n_perp_.vector();
  const auto& b = n_perp_prime_.vector();
  const auto& c = n0_.vector();
  if (std::abs(a.dot(b)) > kUnitTolerance || std::abs(a.dot(c)) > kUnitTolerance ||
      std::abs(b.dot(c)) > kUnitTolerance) {
    throw ValidationError("frame axes are not orthogonal");
  }
  if ((a.cross(b) - c).cwiseAbs().maxCoeff() > 1e-10) throw ValidationError("frame is not right-handed");
}

LocalUnitary::LocalUnitary(std::vector<Eigen::Matrix2cd> per_qubit) : per_qubit_(std::move(per_qubit)) {
  for (std::size_t q = 0; q < per_qubit_.size(); ++q) {
    if (!is_unitary(per_qubit_[q])) {
      throw ValidationError("local unitary for qubit " + std::to_string(q) + " is not unitary");
    }
  }
}

LocalUnitary LocalUnitary::identity(int num_qubits) {
  return LocalUnitary(std::vector<Eigen::Matrix2cd>(static_cast<std::size_t>(num_qubits),
                                                    Eigen::Matrix2cd::Identity()));
}

const Eigen::Matrix2cd& pauli(int axis) {
  static const std::array<Eigen::Matrix2cd, 3> matrices = [] {
    const Complex i(0.0, 1.0);
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, -i, i, 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  if (axis < 0 || axis > 2) throw ValidationError("Pauli axis must be 0, 1 or 2");
  return matrices[static_cast<std::size_t>(axis)];
}

Eigen::Matrix2cd pauli_dot(const Eigen::Vector3d& n) {
  return n[0] * pauli(0) + n[1] * pauli(1) + n[2] * pauli(2);
}

Eigen::Matrix2cd rotation_unitary(const Eigen::Vector3d& axis, double angle) {
  const Eigen::Vector3d n = Direction::normalize(axis).vector();
  const Complex i(0.0, 1.0);
  return std::cos(angle / 2) * Eigen::Matrix2cd::Identity() - i * std::sin(angle / 2) * pauli_dot(n);
}

Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::Vector4d q;
  for (auto& x : q) x = gauss(rng);
  q.normalize();
  const Complex a(q[0], q[1]);
  const Complex b(q[2], q[3]);
  Eigen::Matrix2cd u;
  u << a, -std::conj(b), b, std::conj(a);
  return u;
}

LocalUnitary random_local_unitary(int num_qubits, std::mt19937_64& rng) {
  std::vector<Eigen::Matrix2cd> us;
  for (int q = 0; q < num_qubits; ++q) us.push_back(random_unitary(rng));
  return LocalUnitary(std::move(us));
}

namespace detail {

void apply_qubit_op(Eigen::Ref<Eigen::VectorXcd> vec, int num_qubits, int qubit, const Eigen::Matrix2cd& op) {
  const Eigen::Index b = stride_of(num_qubits, qubit);
  for (Eigen::Index idx = 0; idx < vec.size(); ++idx) {
    if (idx & b) continue;
    const Complex v0 = vec[idx];
    const Complex v1 = vec[idx | b];
    vec[idx] = op(0, 0) * v0 + op(0, 1) * v1;
    vec[idx | b] = op(1, 0) * v0 + op(1, 1) * v1;
  }
}

void apply_qubit_op_rows(Eigen::MatrixXcd& mat, int num_qubits, int qubit, const Eigen::Matrix2cd& op) {
  const Eigen::Index b = stride_of(num_qubits, qubit);
  for (Eigen::Index idx = 0; idx < mat.rows(); ++idx) {
    if (idx & b) continue;
    const Eigen::RowVectorXcd r0 = mat.row(idx);
    const Eigen::RowVectorXcd r1 = mat.row(idx | b);
    mat.row(idx) = op(0, 0) * r0 + op(0, 1) * r1;
    mat.row(idx | b) = op(1, 0) * r0 + op(1, 1) * r1;
  }
}

}  // namespace detail

PureState apply_local_unitaries(const PureState& state, const LocalUnitary& u) {
  const int n = state.num_qubits();
  if (u.num_qubits() != n) throw ValidationError("local unitary count does not match qubit count");
  Eigen::VectorXcd psi = state.amplitudes();
  for (int q = 0; q < n; ++q) detail::apply_qubit_op(psi, n, q, u[q]);
  psi.normalize();
  return PureState(n, std::move(psi));
}

DensityMatrix apply_local_unitaries(const DensityMatrix& state, const LocalUnitary& u) {
  const int n = state.num_qubits();
  if (u.num_qubits() != n) throw ValidationError("local unitary count does not match qubit count");
  Eigen::MatrixXcd m = state.matrix();
  for (int q = 0; q < n; ++q) detail::apply_qubit_op_rows(m, n, q, u[q]);
  Eigen::MatrixXcd half = m.adjoint();
  for (int q = 0; q < n; ++q) detail::apply_qubit_op_rows(half, n, q, u[q]);
  return DensityMatrix(n, 0.5 * (half + half.adjoint()));
}

Eigen::Matrix3d su2_to_so3(const Eigen::Matrix2cd& u) {
  if (!is_unitary(u)) throw ValidationError("su2_to_so3: matrix is not unitary");
  Eigen::Matrix3d o;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) o(a, b) = 0.5 * (pauli(a) * u * pauli(b) * u.adjoint()).trace().real();
  return o;
}

Eigen::Matrix2cd alignment_unitary(const Eigen::Vector3d& bloch) {
  const double norm = bloch.norm();
  if (!(norm > 0.0)) throw ValidationError("alignment_unitary: zero Bloch vector");
  const Eigen::Vector3d s = bloch / norm;
  const Eigen::Vector3d axis = s.cross(Eigen::Vector3d::UnitZ());
  if (axis.norm() < 1e-12) {
    if (s.z() > 0) return Eigen::Matrix2cd::Identity();
    return rotation_unitary(Eigen::Vector3d::UnitX(), std::numbers::pi);
  }
  return rotation_unitary(axis, std::atan2(axis.norm(), s.z()));
}

Eigen::Vector3d bloch_expectations(const PureState& state, int qubit) {
  const int n = state.num_qubits();
  check_qubit(qubit, n);
  const Eigen::Index b = stride_of(n, qubit);
  const auto& psi = state.amplitudes();
  double z = 0.0;
  Complex rho01 = 0.0;
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
    if (idx & b) continue;
    z += std::norm(psi[idx]) - std::norm(psi[idx | b]);
    rho01 += psi[idx] * std::conj(psi[idx | b]);
  }
  return bloch_from(z, rho01);
}

Eigen::Vector3d bloch_expectations(const DensityMatrix& state, int qubit) {
  const int n = state.num_qubits();
  check_qubit(qubit, n);
  const Eigen::Index b = stride_of(n, qubit);
  const auto& rho = state.matrix();
  double z = 0.0;
  Complex rho01 = 0.0;
  for (Eigen::Index idx = 0; idx < rho.rows(); ++idx) {
    if (idx & b) continue;
    z += rho(idx, idx).real() - rho(idx | b, idx | b).real();
    rho01 += rho(idx, idx | b);
  }
  return bloch_from(z, rho01);
}

Eigen::Vector3d bloch_expectations(const SymmetricState& state, int qubit) {
  check_qubit(qubit, state.num_qubits());
  return 2.0 * mean_spin(state) / state.num_qubits();
}

Eigen::Vector3d bloch_expectations(const AnyState& state, int qubit) {
  return std::visit([&](const auto& s) { return bloch_expectations(s, qubit); }, state);
}

Eigen::Vector3d mean_spin(const PureState& state) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int q = 0; q < state.num_qubits(); ++q) sum += bloch_expectations(state, q);
  return 0.5 * sum;
}

Eigen::Vector3d mean_spin(const DensityMatrix& state) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int q = 0; q < state.num_qubits(); ++q) sum += bloch_expectations(state, q);
  return 0.5 * sum;
}

Eigen::Vector3d mean_spin(const SymmetricState& state) {
  return detail::dicke_moments(state.dicke_amplitudes()).mean;
}

Eigen::Vector3d mean_spin(const AnyState& state) {
  return std::visit([](const auto& s) { return mean_spin(s); }, state);
}

template <class State>
Direction mean_spin_direction(const State& state) {
  const Eigen::Vector3d j = mean_spin(state);
  if (j.norm() <= kZeroSpinTolerance) throw MeanSpinZero();
  return Direction::normalize(j);
}

template Direction mean_spin_direction(const PureState&);
template Direction mean_spin_direction(const DensityMatrix&);
template Direction mean_spin_direction(const SymmetricState&);
template Direction mean_spin_direction(const AnyState&);

Eigen::Matrix3d collective_covariance(const PureState& state) {
  const int n = state.num_qubits();
  const auto& psi = state.amplitudes();
  std::array<Eigen::VectorXcd, 3> applied;
  Eigen::Vector3d mean;
  for (int a = 0; a < 3; ++a) {
    applied[a] = apply_half_sum(psi, n, std::vector<Eigen::Vector3d>(n, Eigen::Vector3d::Unit(a)));
    mean[a] = psi.dot(applied[a]).real();
  }
  Eigen::Matrix3d cov;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) cov(a, b) = applied[a].dot(applied[b]).real() - mean[a] * mean[b];
  return 0.5 * (cov + cov.transpose());
}

Eigen::Matrix3d collective_covariance(const DensityMatrix& state) {
  const int n = state.num_qubits();
  std::array<Eigen::MatrixXcd, 3> applied;
  std::array<std::vector<Eigen::Vector3d>, 3> axes;
  Eigen::Vector3d mean;
  for (int a = 0; a < 3; ++a) {
    axes[a].assign(n, Eigen::Vector3d::Unit(a));
    applied[a] = apply_half_sum_rows(state.matrix(), n, axes[a]);
    mean[a] = applied[a].trace().real();
  }
  Eigen::Matrix3d cov;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      cov(a, b) = apply_half_sum_rows(applied[b], n, axes[a]).trace().real() - mean[a] * mean[b];
      cov(b, a) = cov(a, b);
    }
  return cov;
}

Eigen::Matrix3d collective_covariance(const SymmetricState& state) {
  const auto moments = detail::dicke_moments(state.dicke_amplitudes());
  const Eigen::Matrix3d cov = 0.5 * moments.anticommutator - moments.mean * moments.mean.transpose();
  return 0.5 * (cov + cov.transpose());
}

Eigen::Matrix3d collective_covariance(const AnyState& state) {
  return std::visit([](const auto& s) { return collective_covariance(s); }, state);
}

Frame complete_frame(const Direction& n0) {
  const Eigen::Vector3d cross = Eigen::Vector3d::UnitZ().cross(n0.vector());
  const Eigen::Vector3d perp = cross.norm() < 1e-8 ? Eigen::Vector3d::UnitX().eval() : cross.normalized();
  const Eigen::Vector3d perp_prime = n0.vector().cross(perp);
  return Frame(Direction::normalize(perp), Direction::normalize(perp_prime), n0);
}

CollectiveMoment collective_moment(const PureState& state, std::span<const Frame> frames) {
  const int n = state.num_qubits();
  check_frame_count(frames.size(), n);
  const auto axes = axes_of(frames);
  const auto& psi = state.amplitudes();
  const Eigen::VectorXcd applied[2] = {apply_half_sum(psi, n, axes.perp), apply_half_sum(psi, n, axes.perp_prime)};
  CollectiveMoment out;
  out.mean_J0 = psi.dot(apply_half_sum(psi, n, axes.zero)).real();
  const double means[2] = {psi.dot(applied[0]).real(), psi.dot(applied[1]).real()};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out.var_perp(a, b) = applied[a].dot(applied[b]).real() - means[a] * means[b];
  return out;
}

CollectiveMoment collective_moment(const DensityMatrix& state, std::span<const Frame> frames) {
  const int n = state.num_qubits();
  check_frame_count(frames.size(), n);
  const auto axes = axes_of(frames);
  const auto& rho = state.matrix();
  const Eigen::MatrixXcd applied[2] = {apply_half_sum_rows(rho, n, axes.perp),
                                       apply_half_sum_rows(rho, n, axes.perp_prime)};
  CollectiveMoment out;
  out.mean_J0 = apply_half_sum_rows(rho, n, axes.zero).trace().real();
  const double means[2] = {applied[0].trace().real(), applied[1].trace().real()};
  const std::vector<Eigen::Vector3d>* dirs[2] = {&axes.perp, &axes.perp_prime};
  for (int a = 0; a < 2; ++a) {
    for (int b = a; b < 2; ++b) {
      // Re Tr(A B rho) is the symmetrized second moment.
      const double second = apply_half_sum_rows(applied[b], n, *dirs[a]).trace().real();
      out.var_perp(a, b) = second - means[a] * means[b];
      out.var_perp(b, a) = out.var_perp(a, b);
    }
  }
  return out;
}

CollectiveMoment collective_moment(const SymmetricState& state, std::span<const Frame> frames) {
  check_frame_count(frames.size(), state.num_qubits());
  return moment_from_marginals(Marginals::of(state), axes_of(frames));
}

CollectiveMoment collective_moment(const AnyState& state, std::span<const Frame> frames) {
  return std::visit([&](const auto& s) { return collective_moment(s, frames); }, state);
}

}  // namespace spinsq
