#include "spinsq/squeezing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include "spinsq/error.hpp"

namespace spinsq {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSymmetryTolerance = 1e-8;

double clamp_nonnegative(double x) { return x < 0.0 ? 0.0 : x; }

Eigen::Matrix3d in_plane_rotation(double angle) {
  return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

Eigen::Vector2d unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

template <class State>
SqueezingResult standard_impl(const State& state, int n) {
  SqueezingResult r;
  const Eigen::Vector3d j = mean_spin(state);
  r.mean_J0 = j.norm();
  if (r.mean_J0 <= kZeroSpinTolerance) {
    r.undefined_reason = UndefinedReason::MeanSpinZero;
    return r;
  }
  const auto q = quadratic_form_min(collective_covariance(state), Direction::normalize(j));
  const double var = clamp_nonnegative(q.value);
  const double spread = std::sqrt(var);
  r.min_variance = var;
  r.optimal_angle = q.angle;
  r.xi1 = 2.0 * spread / std::sqrt(static_cast<double>(n));
  r.xi2 = std::sqrt(static_cast<double>(n)) * spread / r.mean_J0;
  return r;
}

// Minimizes sum_{i<j} u_i^T B_ij u_j over unit 2-vectors u_i. With the field
// h_i = sum_{j != i} B_ij u_j the exact block update is u_i = -h_i / |h_i|.
class PairBlocks {
 public:
  explicit PairBlocks(const Marginals& aligned) : n_(aligned.num_qubits()), blocks_(n_ * n_) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (i != j) blocks_[i * n_ + j] = aligned.correlation(i, j).topLeftCorner<2, 2>();
  }
  Eigen::Vector2d field(const std::vector<Eigen::Vector2d>& u, int i) const {
    Eigen::Vector2d h = Eigen::Vector2d::Zero();
    for (int j = 0; j < n_; ++j)
      if (j != i) h += blocks_[i * n_ + j] * u[j];
    return h;
  }
  double objective(const std::vector<Eigen::Vector2d>& u) const {
    double f = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) f += u[i].dot(blocks_[i * n_ + j] * u[j]);
    return f;
  }

 private:
  int n_;
  std::vector<Eigen::Matrix2d> blocks_;
};

bool converged(double before, double after) { return before - after <= 1e-15 * (1.0 + std::abs(after)); }

double descend(const PairBlocks& problem, std::vector<Eigen::Vector2d>& u, int max_sweeps) {
  const int n = static_cast<int>(u.size());
  double f = problem.objective(u);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d h = problem.field(u, i);
      const double norm = h.norm();
      if (norm > 1e-300) u[i] = -h / norm;
    }
    const double next = problem.objective(u);
    const bool done = converged(f, next);
    f = next;
    if (done) break;
  }
  return f;
}

// Every pair shares one symmetric block M: h_i = M (V - u_i) with V = sum_j u_j,
// and the objective is (V^T M V - sum_i u_i^T M u_i) / 2.
double uniform_objective(const Eigen::Matrix2d& m, const std::vector<Eigen::Vector2d>& u) {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double self = 0.0;
  for (const auto& x : u) {
    v += x;
    self += x.dot(m * x);
  }
  return 0.5 * (v.dot(m * v) - self);
}

double descend_uniform(const Eigen::Matrix2d& m, std::vector<Eigen::Vector2d>& u, int max_sweeps) {
  const Eigen::Matrix2d sym = 0.5 * (m + m.transpose());
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (const auto& x : u) v += x;
  double f = uniform_objective(sym, u);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (auto& x : u) {
      const Eigen::Vector2d h = sym * (v - x);
      const double norm = h.norm();
      if (norm <= 1e-300) continue;
      const Eigen::Vector2d next = -h / norm;
      v += next - x;
      x = next;
    }
    v.setZero();
    for (const auto& x : u) v += x;
    const double next = uniform_objective(sym, u);
    const bool done = converged(f, next);
    f = next;
    if (done) break;
  }
  return f;
}

std::vector<std::vector<Eigen::Vector2d>> starting_points(int n, int random_starts) {
  std::vector<std::vector<Eigen::Vector2d>> starts;
  for (int k = 0; k < 8; ++k) starts.emplace_back(n, unit(k * kPi / 8));
  // Sign patterns: exhaustive for few qubits, alternating and split halves otherwise.
  std::vector<std::uint32_t> masks;
  if (n <= 6) {
    for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) masks.push_back(mask << 1);
  } else {
    std::uint32_t alternating = 0;
    std::uint32_t half = 0;
    for (int q = 0; q < std::min(n, 32); ++q) {
      if (q % 2) alternating |= 1u << q;
      if (q >= n / 2) half |= 1u << q;
    }
    masks = {alternating, half};
  }
  for (std::uint32_t mask : masks) {
    for (int k = 0; k < 4; ++k) {
      std::vector<Eigen::Vector2d> u(n, unit(k * kPi / 4));
      for (int q = 0; q < n; ++q) {
        const bool flip = q < 32 ? (mask >> q) & 1u : (q % 2 == 1);
        if (flip) u[q] = -u[q];
      }
      starts.push_back(std::move(u));
    }
  }
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int s = 0; s < random_starts; ++s) {
    std::vector<Eigen::Vector2d> u;
    for (int q = 0; q < n; ++q) u.push_back(unit(angle(rng)));
    starts.push_back(std::move(u));
  }
  return starts;
}

struct InPlaneOptimum {
  std::vector<double> angles;
  double value = 0.0;
};

InPlaneOptimum optimize_in_plane(const Marginals& aligned) {
  const int n = aligned.num_qubits();
  InPlaneOptimum best;
  if (n < 2) {
    best.angles.assign(static_cast<std::size_t>(n), 0.0);
    return best;
  }
  if (n == 2) {
    // min u^T B v over unit u, v is minus the largest singular value.
    const Eigen::Matrix2d b = aligned.correlation(0, 1).topLeftCorner<2, 2>();
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector2d u0 = -svd.matrixU().col(0);
    const Eigen::Vector2d u1 = svd.matrixV().col(0);
    best.angles = {std::atan2(u0.y(), u0.x()), std::atan2(u1.y(), u1.x())};
    best.value = -svd.singularValues()[0];
    return best;
  }

  const bool uniform = aligned.is_uniform();
  const int random_starts = n <= 10 ? 64 : 16;
  const int max_sweeps = uniform ? 5000 : 20000;
  std::unique_ptr<PairBlocks> blocks;
  Eigen::Matrix2d shared;
  if (uniform) {
    shared = aligned.correlation(0, 1).topLeftCorner<2, 2>();
  } else {
    blocks = std::make_unique<PairBlocks>(aligned);
  }
  best.value = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Vector2d> best_u;
  for (auto& u : starting_points(n, random_starts)) {
    const double f = uniform ? descend_uniform(shared, u, max_sweeps) : descend(*blocks, u, max_sweeps);
    if (f < best.value) {
      best.value = f;
      best_u = std::move(u);
    }
  }
  for (const auto& x : best_u) best.angles.push_back(std::atan2(x.y(), x.x()));
  return best;
}

// S = sym sum_{i<j} R_i T R_j^T for one symmetric pair matrix T shared by every pair.
Eigen::Matrix3d uniform_aggregate(const Eigen::Matrix3d& t, std::span<const Eigen::Matrix3d> rotations) {
  const Eigen::Matrix3d sym = 0.5 * (t + t.transpose());
  Eigen::Matrix3d total = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d self = Eigen::Matrix3d::Zero();
  for (const auto& r : rotations) {
    total += r;
    self += r * sym * r.transpose();
  }
  const Eigen::Matrix3d s = 0.5 * (total * sym * total.transpose() - self);
  return 0.5 * (s + s.transpose());
}

// Second-moment data for brute-force minimization: Var(sum_i c_i . w_i / 2)
// = c^T K c / 4 over the 2N coefficients c.
struct VarianceForm {
  int n = 0;
  Eigen::MatrixXd k;
};

std::vector<Eigen::Vector3d> perpendicular_axes(std::span<const Direction> frames_n0) {
  std::vector<Eigen::Vector3d> axes;
  for (const auto& d : frames_n0) {
    const Frame f = complete_frame(d);
    axes.push_back(f.n_perp().vector());
    axes.push_back(f.n_perp_prime().vector());
  }
  return axes;
}

VarianceForm variance_form(const PureState& state, std::span<const Direction> frames_n0) {
  const int n = state.num_qubits();
  const auto axes = perpendicular_axes(frames_n0);
  const auto& psi = state.amplitudes();
  Eigen::MatrixXcd w(psi.size(), 2 * n);
  for (int c = 0; c < 2 * n; ++c) {
    Eigen::VectorXcd col = psi;
    detail::apply_qubit_op(col, n, c / 2, pauli_dot(axes[static_cast<std::size_t>(c)]));
    w.col(c) = col;
  }
  const Eigen::VectorXd m = (w.adjoint() * psi).real();
  const Eigen::MatrixXd g = (w.adjoint() * w).real();
  return {n, g - m * m.transpose()};
}

// Tr(op_q X) for a single-qubit operator on qubit q, in O(dim).
Complex qubit_trace(const Eigen::MatrixXcd& x, int n, int qubit, const Eigen::Matrix2cd& op) {
  const Eigen::Index b = Eigen::Index{1} << (n - 1 - qubit);
  Complex sum = 0.0;
  for (Eigen::Index idx = 0; idx < x.rows(); ++idx) {
    if (idx & b) continue;
    sum += op(0, 0) * x(idx, idx) + op(0, 1) * x(idx | b, idx) + op(1, 0) * x(idx, idx | b) +
           op(1, 1) * x(idx | b, idx | b);
  }
  return sum;
}

VarianceForm variance_form(const DensityMatrix& state, std::span<const Direction> frames_n0) {
  const int n = state.num_qubits();
  const auto axes = perpendicular_axes(frames_n0);
  std::vector<Eigen::Matrix2cd> ops;
  for (const auto& a : axes) ops.push_back(pauli_dot(a));
  Eigen::VectorXd m(2 * n);
  Eigen::MatrixXd g(2 * n, 2 * n);
  for (int c = 0; c < 2 * n; ++c) {
    Eigen::MatrixXcd applied = state.matrix();
    detail::apply_qubit_op_rows(applied, n, c / 2, ops[static_cast<std::size_t>(c)]);
    m[c] = applied.trace().real();
    for (int r = 0; r < 2 * n; ++r) g(r, c) = qubit_trace(applied, n, r / 2, ops[static_cast<std::size_t>(r)]).real();
  }
  const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
  return {n, sym - m * m.transpose()};
}

double minimize_variance(const VarianceForm& form, int resolution, std::uint64_t seed) {
  const int n = form.n;
  const auto& k = form.k;
  const double step = 2 * kPi / resolution;
  auto coefficients = [&](const std::vector<double>& phi) {
    Eigen::VectorXd c(2 * n);
    for (int q = 0; q < n; ++q) {
      c[2 * q] = std::cos(phi[q]);
      c[2 * q + 1] = std::sin(phi[q]);
    }
    return c;
  };
  auto run = [&](std::vector<double> phi) {
    Eigen::VectorXd c = coefficients(phi);
    double value = 0.25 * c.dot(k * c);
    for (int sweep = 0; sweep < 500; ++sweep) {
      const double before = value;
      for (int q = 0; q < n; ++q) {
        // Variance as a function of phi_q with every other angle held fixed.
        Eigen::Vector2d field = Eigen::Vector2d::Zero();
        for (int p = 0; p < n; ++p) {
          if (p == q) continue;
          field += k.block(2 * q, 2 * p, 2, 2) * c.segment<2>(2 * p);
        }
        const Eigen::Matrix2d self = k.block(2 * q, 2 * q, 2, 2);
        auto local = [&](double a) {
          const Eigen::Vector2d x = unit(a);
          return x.dot(self * x) + 2.0 * x.dot(field);
        };
        double best_angle = phi[q];
        double best = local(best_angle);
        for (int s = 0; s < resolution; ++s) {
          const double a = s * step;
          const double v = local(a);
          if (v < best) {
            best = v;
            best_angle = a;
          }
        }
        // Golden-section refinement inside the bracketing grid cell pair.
        double lo = best_angle - step;
        double hi = best_angle + step;
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - ratio * (hi - lo);
        double x2 = lo + ratio * (hi - lo);
        double f1 = local(x1);
        double f2 = local(x2);
        for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
          if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = local(x1);
          } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = local(x2);
          }
        }
        const double refined = 0.5 * (lo + hi);
        if (local(refined) < best) best_angle = refined;
        phi[q] = best_angle;
        c.segment<2>(2 * q) = unit(best_angle);
      }
      value = 0.25 * c.dot(k * c);
      if (before - value <= 1e-15) break;
    }
    return value;
  };

  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g < 8; ++g) best = std::min(best, run(std::vector<double>(n, g * kPi / 8)));
  for (int g = 0; g < 4; ++g) {
    std::vector<double> phi(n);
    for (int q = 0; q < n; ++q) phi[q] = g * kPi / 4 + (q % 2 ? kPi : 0.0);
    best = std::min(best, run(phi));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int s = 0; s < 24; ++s) {
    std::vector<double> phi(n);
    for (auto& a : phi) a = angle(rng);
    best = std::min(best, run(phi));
  }
  return clamp_nonnegative(best);
}

void check_oracle_inputs(int n, std::size_t frames, int resolution) {
  if (static_cast<int>(frames) != n) throw ValidationError("brute_force_min_variance: one direction per qubit required");
  if (resolution < 64) throw ValidationError("brute_force_min_variance: angular resolution must be at least 64");
}

}  // namespace

std::string_view to_string(UndefinedReason reason) {
  switch (reason) {
    case UndefinedReason::MeanSpinZero:
      return "MeanSpinZero";
    case UndefinedReason::QubitBlochZero:
      return "QubitBlochZero";
  }
  return "Unknown";
}

QuadraticMin quadratic_form_min(const Eigen::Matrix3d& m, const Direction& n0) {
  const Frame frame = complete_frame(n0);
  const Eigen::Vector3d& e1 = frame.n_perp().vector();
  const Eigen::Vector3d& e2 = frame.n_perp_prime().vector();
  const Eigen::Matrix3d sym = 0.5 * (m + m.transpose());
  const double a = e1.dot(sym * e1);
  const double d = e2.dot(sym * e2);
  const double b = e1.dot(sym * e2);
  const double disc = std::hypot(a - d, 2.0 * b);
  QuadraticMin out;
  out.value = 0.5 * ((a + d) - disc);
  if (disc > 1e-12 * (1.0 + std::abs(a) + std::abs(d))) {
    double angle = 0.5 * (std::atan2(2.0 * b, a - d) + kPi);
    angle = std::fmod(angle, kPi);
    if (angle < 0) angle += kPi;
    out.angle = angle;
  }
  out.direction = Direction::normalize(std::cos(out.angle) * e1 + std::sin(out.angle) * e2);
  return out;
}

SqueezingResult xi_standard(const PureState& state) { return standard_impl(state, state.num_qubits()); }
SqueezingResult xi_standard(const DensityMatrix& state) { return standard_impl(state, state.num_qubits()); }
SqueezingResult xi_standard(const SymmetricState& state) { return standard_impl(state, state.num_qubits()); }
SqueezingResult xi_standard(const AnyState& state) {
  return std::visit([](const auto& s) { return xi_standard(s); }, state);
}

SqueezingResult xi_tilde_symmetric(const Marginals& marginals) {
  if (!marginals.exchange_symmetric(kSymmetryTolerance)) {
    throw ValidationError("state is not exchange symmetric within 1e-8");
  }
  const int n = marginals.num_qubits();
  const Eigen::Vector3d s = marginals.bloch(0);
  const double s0 = s.norm();
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  if (n >= 2) {
    t = marginals.correlation(0, 1);
    t = 0.5 * (t + t.transpose()).eval();
  }
  SqueezingResult r;
  double t_min = 0.0;
  if (s0 > kZeroSpinTolerance) {
    const auto q = quadratic_form_min(t, Direction::normalize(s));
    t_min = q.value;
    r.optimal_angle = q.angle;
  } else {
    t_min = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(t, Eigen::EigenvaluesOnly).eigenvalues()[0];
    r.undefined_reason = UndefinedReason::QubitBlochZero;
  }
  const double xi1 = std::sqrt(clamp_nonnegative(1.0 + (n - 1) * t_min));
  r.xi1_tilde = xi1;
  r.min_variance = 0.25 * n * xi1 * xi1;
  r.mean_J0 = 0.5 * n * s0;
  if (s0 > kZeroSpinTolerance) r.xi2_tilde = xi1 / s0;
  return r;
}

SqueezingResult xi_tilde_symmetric(const PureState& state) { return xi_tilde_symmetric(Marginals::of(state)); }
SqueezingResult xi_tilde_symmetric(const DensityMatrix& state) { return xi_tilde_symmetric(Marginals::of(state)); }
SqueezingResult xi_tilde_symmetric(const SymmetricState& state) { return xi_tilde_symmetric(Marginals::of(state)); }
SqueezingResult xi_tilde_symmetric(const AnyState& state) { return xi_tilde_symmetric(Marginals::of(state)); }

std::vector<Direction> bloch_directions(const Marginals& marginals) {
  std::vector<Direction> out;
  for (int q = 0; q < marginals.num_qubits(); ++q) {
    const Eigen::Vector3d& s = marginals.bloch(q);
    if (s.norm() <= kZeroSpinTolerance) throw QubitBlochZero(q);
    out.push_back(Direction::normalize(s));
  }
  return out;
}

CommonOrientation common_orientation(const Marginals& marginals) {
  const int n = marginals.num_qubits();
  const auto directions = bloch_directions(marginals);
  CommonOrientation out;
  for (const auto& d : directions) out.alignment.push_back(su2_to_so3(alignment_unitary(d.vector())));

  const Marginals aligned = marginals.is_uniform() ? marginals.rotated_uniformly(out.alignment.front())
                                                   : marginals.rotated(out.alignment);
  const Direction z(Eigen::Vector3d::UnitZ());
  if (n >= 2) out.aligned_only_min = quadratic_form_min(aggregate_S(aligned).entries, z).value;

  const auto optimum = optimize_in_plane(aligned);
  out.optimized_min = optimum.value;
  for (int q = 0; q < n; ++q) {
    out.rotations.push_back(in_plane_rotation(-optimum.angles[static_cast<std::size_t>(q)]) *
                            out.alignment[static_cast<std::size_t>(q)]);
  }
  if (n >= 2) {
    if (marginals.is_uniform()) {
      out.s.entries = uniform_aggregate(marginals.correlation(0, 1), out.rotations);
    } else {
      out.s = aggregate_S(marginals.rotated(out.rotations));
    }
  }
  return out;
}

SqueezingResult xi_tilde_general(const Marginals& marginals) {
  const int n = marginals.num_qubits();
  SqueezingResult r;
  double j0 = 0.0;
  for (int q = 0; q < n; ++q) j0 += 0.5 * marginals.bloch(q).norm();
  r.mean_J0 = j0;
  CommonOrientation co;
  try {
    co = common_orientation(marginals);
  } catch (const QubitBlochZero& e) {
    r.undefined_reason = UndefinedReason::QubitBlochZero;
    r.zero_bloch_qubit = e.qubit();
    return r;
  }
  double s_min = 0.0;
  if (n >= 2) {
    const auto q = quadratic_form_min(co.s.entries, Direction(Eigen::Vector3d::UnitZ()));
    s_min = std::min(q.value, co.optimized_min);
    r.optimal_angle = q.angle;
  }
  const double var = clamp_nonnegative(0.25 * (n + 2.0 * s_min));
  r.min_variance = var;
  r.xi1_tilde = 2.0 * std::sqrt(var) / std::sqrt(static_cast<double>(n));
  r.xi2_tilde = std::sqrt(static_cast<double>(n)) * std::sqrt(var) / j0;
  return r;
}

SqueezingResult xi_tilde_general(const PureState& state) { return xi_tilde_general(Marginals::of(state)); }
SqueezingResult xi_tilde_general(const DensityMatrix& state) { return xi_tilde_general(Marginals::of(state)); }
SqueezingResult xi_tilde_general(const SymmetricState& state) { return xi_tilde_general(Marginals::of(state)); }
SqueezingResult xi_tilde_general(const AnyState& state) { return xi_tilde_general(Marginals::of(state)); }

double brute_force_min_variance(const PureState& state, std::span<const Direction> frames_n0,
                                int angular_resolution, std::uint64_t seed) {
  check_oracle_inputs(state.num_qubits(), frames_n0.size(), angular_resolution);
  return minimize_variance(variance_form(state, frames_n0), angular_resolution, seed);
}

double brute_force_min_variance(const DensityMatrix& state, std::span<const Direction> frames_n0,
                                int angular_resolution, std::uint64_t seed) {
  check_oracle_inputs(state.num_qubits(), frames_n0.size(), angular_resolution);
  return minimize_variance(variance_form(state, frames_n0), angular_resolution, seed);
}

double brute_force_min_variance(const SymmetricState& state, std::span<const Direction> frames_n0,
                                int angular_resolution, std::uint64_t seed) {
  return brute_force_min_variance(embed_symmetric(state), frames_n0, angular_resolution, seed);
}

double brute_force_min_variance(const AnyState& state, std::span<const Direction> frames_n0,
                                int angular_resolution, std::uint64_t seed) {
  return std::visit(
      [&](const auto& s) { return brute_force_min_variance(s, frames_n0, angular_resolution, seed); }, state);
}

}  // namespace spinsq
