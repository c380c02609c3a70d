#include "spinsq/reductions.hpp"

#include <algorithm>
#include <string>

#include "dicke.hpp"
#include "spinsq/error.hpp"
#include "spinsq/operators.hpp"

namespace spinsq {
namespace {

void check_index(int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw ValidationError("qubit index " + std::to_string(qubit) + " out of range for " +
                          std::to_string(num_qubits) + " qubits");
  }
}

void check_subset(std::span<const int> subset, int num_qubits) {
  if (subset.empty()) throw ValidationError("reduce: empty qubit subset");
  std::vector<int> sorted(subset.begin(), subset.end());
  for (int q : sorted) check_index(q, num_qubits);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("reduce: repeated qubit index");
  }
}

int bit_of(int qubit, int num_qubits) { return num_qubits - 1 - qubit; }

// Splits every full basis index into (subset index, complement index).
struct IndexSplit {
  std::vector<Eigen::Index> sub;
  std::vector<Eigen::Index> rest;
};

IndexSplit split_indices(int num_qubits, std::span<const int> subset) {
  std::vector<bool> in_subset(static_cast<std::size_t>(num_qubits), false);
  for (int q : subset) in_subset[static_cast<std::size_t>(q)] = true;
  std::vector<int> complement;
  for (int q = 0; q < num_qubits; ++q)
    if (!in_subset[static_cast<std::size_t>(q)]) complement.push_back(q);

  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  IndexSplit split{std::vector<Eigen::Index>(static_cast<std::size_t>(dim)),
                   std::vector<Eigen::Index>(static_cast<std::size_t>(dim))};
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index s = 0;
    for (int q : subset) s = (s << 1) | ((idx >> bit_of(q, num_qubits)) & 1);
    Eigen::Index r = 0;
    for (int q : complement) r = (r << 1) | ((idx >> bit_of(q, num_qubits)) & 1);
    split.sub[static_cast<std::size_t>(idx)] = s;
    split.rest[static_cast<std::size_t>(idx)] = r;
  }
  return split;
}

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

// Unnormalized 4x4 pair block rho_(ij) accumulated from a pure state.
Eigen::Matrix4cd pure_pair_block(const PureState& state, int i, int j) {
  const int n = state.num_qubits();
  const Eigen::Index bi = Eigen::Index{1} << bit_of(i, n);
  const Eigen::Index bj = Eigen::Index{1} << bit_of(j, n);
  const auto& psi = state.amplitudes();
  Eigen::Matrix4cd block = Eigen::Matrix4cd::Zero();
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
    if ((idx & bi) || (idx & bj)) continue;
    const Eigen::Vector4cd v(psi[idx], psi[idx | bj], psi[idx | bi], psi[idx | bi | bj]);
    block.noalias() += v * v.adjoint();
  }
  return block;
}

Eigen::Matrix4cd density_pair_block(const DensityMatrix& state, int i, int j) {
  const int n = state.num_qubits();
  const Eigen::Index bi = Eigen::Index{1} << bit_of(i, n);
  const Eigen::Index bj = Eigen::Index{1} << bit_of(j, n);
  const auto& rho = state.matrix();
  Eigen::Matrix4cd block = Eigen::Matrix4cd::Zero();
  for (Eigen::Index idx = 0; idx < rho.rows(); ++idx) {
    if ((idx & bi) || (idx & bj)) continue;
    const Eigen::Index sub[4] = {idx, idx | bj, idx | bi, idx | bi | bj};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) block(a, b) += rho(sub[a], sub[b]);
  }
  return block;
}

Eigen::Matrix3d correlations_of_block(const Eigen::Matrix4cd& block) {
  Eigen::Matrix3d t;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Eigen::Matrix4cd op;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) op.block<2, 2>(2 * r, 2 * c) = pauli(a)(r, c) * pauli(b);
      t(a, b) = (block * op).trace().real();
    }
  return t;
}

template <class State>
Marginals marginals_from_full(const State& state, Eigen::Matrix4cd (*pair_block)(const State&, int, int)) {
  const int n = state.num_qubits();
  std::vector<Eigen::Vector3d> bloch;
  bloch.reserve(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) bloch.push_back(bloch_expectations(state, q));
  std::vector<Eigen::Matrix3d> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back(correlations_of_block(pair_block(state, i, j)));
  return Marginals(std::move(bloch), std::move(pairs));
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(const Eigen::Matrix3d& m) : entries(m) {
  if (!m.allFinite() || m.cwiseAbs().maxCoeff() > 1.0 + 1e-10) {
    throw ValidationError("correlation matrix entry outside [-1, 1]");
  }
}

Marginals::Marginals(std::vector<Eigen::Vector3d> bloch, std::vector<Eigen::Matrix3d> pairs)
    : num_qubits_(static_cast<int>(bloch.size())), bloch_(std::move(bloch)), pairs_(std::move(pairs)) {
  if (num_qubits_ < 1) throw ValidationError("Marginals: no qubits");
  const std::size_t expected = static_cast<std::size_t>(num_qubits_) * (num_qubits_ - 1) / 2;
  if (pairs_.size() != expected) {
    throw ValidationError("Marginals: expected " + std::to_string(expected) + " pair matrices");
  }
}

Marginals Marginals::uniform(int num_qubits, const Eigen::Vector3d& bloch, const Eigen::Matrix3d& pair) {
  if (num_qubits < 1) throw ValidationError("Marginals: no qubits");
  Marginals m;
  m.num_qubits_ = num_qubits;
  m.uniform_ = true;
  m.bloch_ = {bloch};
  m.pairs_ = {pair};
  return m;
}

Marginals Marginals::of(const PureState& state) { return marginals_from_full(state, &pure_pair_block); }

Marginals Marginals::of(const DensityMatrix& state) {
  return marginals_from_full(state, &density_pair_block);
}

Marginals Marginals::of(const SymmetricState& state) {
  const int n = state.num_qubits();
  const auto moments = detail::dicke_moments(state.dicke_amplitudes());
  const Eigen::Vector3d s = 2.0 * moments.mean / n;
  const Eigen::Matrix3d t = n >= 2 ? collective_to_pair_correlations(state).entries
                                   : Eigen::Matrix3d::Zero().eval();
  return uniform(n, s, t);
}

Marginals Marginals::of(const AnyState& state) {
  return std::visit([](const auto& s) { return Marginals::of(s); }, state);
}

std::size_t Marginals::pair_index(int i, int j) const {
  // Offset of row i in the packed upper triangle, then column j.
  const std::size_t n = static_cast<std::size_t>(num_qubits_);
  const std::size_t ui = static_cast<std::size_t>(i);
  return ui * (2 * n - ui - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

const Eigen::Vector3d& Marginals::bloch(int qubit) const {
  check_index(qubit, num_qubits_);
  return uniform_ ? bloch_.front() : bloch_[static_cast<std::size_t>(qubit)];
}

Eigen::Matrix3d Marginals::correlation(int i, int j) const {
  check_index(i, num_qubits_);
  check_index(j, num_qubits_);
  if (i == j) throw ValidationError("correlation: qubit indices must differ");
  const Eigen::Matrix3d& stored = uniform_ ? pairs_.front() : pairs_[i < j ? pair_index(i, j) : pair_index(j, i)];
  if (i < j) return stored;
  return stored.transpose();
}

Marginals Marginals::rotated(std::span<const Eigen::Matrix3d> per_qubit) const {
  if (static_cast<int>(per_qubit.size()) != num_qubits_) {
    throw ValidationError("Marginals::rotated: rotation count does not match qubit count");
  }
  std::vector<Eigen::Vector3d> bloch;
  bloch.reserve(per_qubit.size());
  for (int q = 0; q < num_qubits_; ++q) bloch.push_back(per_qubit[q] * this->bloch(q));
  std::vector<Eigen::Matrix3d> pairs;
  pairs.reserve(static_cast<std::size_t>(num_qubits_) * (num_qubits_ - 1) / 2);
  for (int i = 0; i < num_qubits_; ++i)
    for (int j = i + 1; j < num_qubits_; ++j)
      pairs.push_back(per_qubit[i] * correlation(i, j) * per_qubit[j].transpose());
  return Marginals(std::move(bloch), std::move(pairs));
}

Marginals Marginals::rotated_uniformly(const Eigen::Matrix3d& rotation) const {
  Marginals out = *this;
  for (auto& s : out.bloch_) s = rotation * s;
  for (auto& t : out.pairs_) t = rotation * t * rotation.transpose();
  return out;
}

Eigen::Vector3d Marginals::mean_spin() const {
  if (uniform_) return 0.5 * num_qubits_ * bloch_.front();
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& s : bloch_) sum += s;
  return 0.5 * sum;
}

Eigen::Matrix3d Marginals::collective_covariance() const {
  const double n = num_qubits_;
  Eigen::Matrix3d pair_sum = Eigen::Matrix3d::Zero();  // sum over ordered pairs i != j
  if (uniform_) {
    pair_sum = 0.5 * n * (n - 1) * (pairs_.front() + pairs_.front().transpose());
  } else {
    for (const auto& t : pairs_) pair_sum += t + t.transpose();
  }
  const Eigen::Vector3d mean = mean_spin();
  return 0.25 * (n * Eigen::Matrix3d::Identity() + pair_sum) - mean * mean.transpose();
}

bool Marginals::exchange_symmetric(double tolerance) const {
  if (uniform_) return (pairs_.front() - pairs_.front().transpose()).cwiseAbs().maxCoeff() <= tolerance;
  for (const auto& s : bloch_)
    if ((s - bloch_.front()).cwiseAbs().maxCoeff() > tolerance) return false;
  for (const auto& t : pairs_) {
    if ((t - pairs_.front()).cwiseAbs().maxCoeff() > tolerance) return false;
    if ((t - t.transpose()).cwiseAbs().maxCoeff() > tolerance) return false;
  }
  return true;
}

DensityMatrix reduce(const PureState& state, std::span<const int> subset) {
  const int n = state.num_qubits();
  check_subset(subset, n);
  const int k = static_cast<int>(subset.size());
  if (k > kMaxDensityQubits) throw CapacityError("reduce: subset too large for a density matrix");
  const auto split = split_indices(n, subset);
  Eigen::MatrixXcd psi_matrix =
      Eigen::MatrixXcd::Zero(Eigen::Index{1} << k, Eigen::Index{1} << (n - k));
  const auto& psi = state.amplitudes();
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx)
    psi_matrix(split.sub[static_cast<std::size_t>(idx)], split.rest[static_cast<std::size_t>(idx)]) =
        psi[idx];
  return DensityMatrix(k, hermitize(psi_matrix * psi_matrix.adjoint()));
}

DensityMatrix reduce(const DensityMatrix& state, std::span<const int> subset) {
  const int n = state.num_qubits();
  check_subset(subset, n);
  const int k = static_cast<int>(subset.size());
  const auto split = split_indices(n, subset);
  const auto& rho = state.matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
  for (Eigen::Index a = 0; a < rho.rows(); ++a)
    for (Eigen::Index b = 0; b < rho.cols(); ++b)
      if (split.rest[static_cast<std::size_t>(a)] == split.rest[static_cast<std::size_t>(b)])
        out(split.sub[static_cast<std::size_t>(a)], split.sub[static_cast<std::size_t>(b)]) += rho(a, b);
  return DensityMatrix(k, hermitize(out));
}

DensityMatrix reduce(const SymmetricState& state, std::span<const int> subset) {
  return reduce(embed_symmetric(state), subset);
}

DensityMatrix reduce(const AnyState& state, std::span<const int> subset) {
  return std::visit([&](const auto& s) { return reduce(s, subset); }, state);
}

Eigen::Matrix3d pair_correlations(const DensityMatrix& two_qubit) {
  if (two_qubit.num_qubits() != 2) throw ValidationError("pair_correlations: expected two qubits");
  return correlations_of_block(two_qubit.matrix());
}

CorrelationMatrix correlation_matrix(const PureState& state, int i, int j) {
  check_index(i, state.num_qubits());
  check_index(j, state.num_qubits());
  if (i == j) throw ValidationError("correlation_matrix: qubit indices must differ");
  return CorrelationMatrix(correlations_of_block(pure_pair_block(state, i, j)));
}

CorrelationMatrix correlation_matrix(const DensityMatrix& state, int i, int j) {
  check_index(i, state.num_qubits());
  check_index(j, state.num_qubits());
  if (i == j) throw ValidationError("correlation_matrix: qubit indices must differ");
  return CorrelationMatrix(correlations_of_block(density_pair_block(state, i, j)));
}

CorrelationMatrix correlation_matrix(const SymmetricState& state, int i, int j) {
  check_index(i, state.num_qubits());
  check_index(j, state.num_qubits());
  if (i == j) throw ValidationError("correlation_matrix: qubit indices must differ");
  return collective_to_pair_correlations(state);
}

CorrelationMatrix correlation_matrix(const AnyState& state, int i, int j) {
  return std::visit([&](const auto& s) { return correlation_matrix(s, i, j); }, state);
}

AggregateS aggregate_S(const Marginals& marginals) {
  const int n = marginals.num_qubits();
  if (n < 2) throw ValidationError("aggregate_S: requires at least two qubits");
  Eigen::Matrix3d total = Eigen::Matrix3d::Zero();
  if (marginals.is_uniform()) {
    total = 0.5 * n * (n - 1) * marginals.correlation(0, 1);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) total += marginals.correlation(i, j);
  }
  return AggregateS{0.5 * (total + total.transpose())};
}

CorrelationMatrix collective_to_pair_correlations(const SymmetricState& state) {
  const int n = state.num_qubits();
  if (n < 2) throw ValidationError("collective_to_pair_correlations: requires N >= 2");
  const auto moments = detail::dicke_moments(state.dicke_amplitudes());
  Eigen::Matrix3d t = (2.0 * moments.anticommutator - n * Eigen::Matrix3d::Identity()) /
                      (static_cast<double>(n) * (n - 1));
  t = 0.5 * (t + t.transpose()).eval();
  // Rounding may push |T_ab| a hair above 1 for extremal states.
  return CorrelationMatrix(t.cwiseMax(-1.0).cwiseMin(1.0));
}

}  // namespace spinsq
