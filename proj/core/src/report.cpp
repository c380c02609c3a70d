#include "spinsq/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "spinsq/error.hpp"

#ifndef SPINSQ_VERSION
#define SPINSQ_VERSION "0.0.0"
#endif

namespace spinsq {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kSymmetryTolerance = 1e-8;

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json vector_json(const Eigen::Vector3d& v) { return Json::array({v[0], v[1], v[2]}); }

Json matrix_json(const Eigen::Matrix3d& m) {
  Json rows = Json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(Json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

Json reason_json(const SqueezingResult& r) {
  return r.undefined_reason ? Json(std::string(to_string(*r.undefined_reason))) : Json(nullptr);
}

Json squeezing_json(const SqueezingResult& r, bool standard) {
  Json j;
  if (standard) {
    j["xi1"] = optional_number(r.xi1);
    j["xi2"] = optional_number(r.xi2);
  } else {
    j["xi1_tilde"] = optional_number(r.xi1_tilde);
    j["xi2_tilde"] = optional_number(r.xi2_tilde);
  }
  j["min_variance"] = optional_number(r.min_variance);
  j["optimal_angle"] = r.optimal_angle;
  j["mean_J0"] = r.mean_J0;
  j["undefined_reason"] = reason_json(r);
  if (r.zero_bloch_qubit) j["zero_bloch_qubit"] = *r.zero_bloch_qubit;
  return j;
}

std::string number_text(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

std::string optional_text(const std::optional<double>& x, const SqueezingResult* owner = nullptr) {
  if (x) return number_text(*x);
  std::string out = "undefined";
  if (owner && owner->undefined_reason) {
    out += " (" + std::string(to_string(*owner->undefined_reason));
    if (owner->zero_bloch_qubit) out += ", qubit " + std::to_string(*owner->zero_bloch_qubit);
    out += ")";
  }
  return out;
}

std::string vector_text(const Eigen::Vector3d& v) {
  return "(" + number_text(v[0]) + ", " + number_text(v[1]) + ", " + number_text(v[2]) + ")";
}

template <class State>
double run_oracle(const State& state, std::span<const Direction> dirs, const AnalysisOptions& options) {
  return brute_force_min_variance(state, dirs, options.oracle_resolution, options.seed);
}

}  // namespace

std::string_view library_version() { return SPINSQ_VERSION; }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

Analysis analyze(const StateFile& file, std::string_view input_bytes, const AnalysisOptions& options) {
  Analysis a;
  a.input_digest = fnv1a_hex(input_bytes);
  a.kind = file.kind();
  a.num_qubits = file.num_qubits();
  const AnyState& state = file.state();
  const Marginals marginals = Marginals::of(state);
  a.exchange_symmetric = marginals.exchange_symmetric(kSymmetryTolerance);

  a.standard = xi_standard(state);
  a.local_invariant = xi_tilde_general(marginals);
  if (a.local_invariant.xi1_tilde) {
    const auto co = common_orientation(marginals);
    if (a.num_qubits >= 2) {
      a.aligned_only_min = co.aligned_only_min;
      a.optimized_min = co.optimized_min;
    }
  }
  if (a.exchange_symmetric) {
    a.symmetric = xi_tilde_symmetric(marginals);
    if (a.num_qubits >= 2) {
      a.invariant = invariant_parts(marginals);
      a.identity = verify_identity_imp1(marginals);
    }
  }
  a.witness = witness(marginals);

  a.uniform_marginals = marginals.is_uniform();
  const int listed = a.uniform_marginals ? 1 : a.num_qubits;
  for (int q = 0; q < listed; ++q) a.bloch_vectors.push_back(marginals.bloch(q));
  if (a.num_qubits >= 2) {
    if (a.uniform_marginals) {
      a.pair_correlations.push_back({0, 1, marginals.correlation(0, 1)});
    } else {
      for (int i = 0; i < a.num_qubits; ++i)
        for (int j = i + 1; j < a.num_qubits; ++j) a.pair_correlations.push_back({i, j, marginals.correlation(i, j)});
    }
  }

  if (a.num_qubits > options.oracle_max_qubits) {
    a.oracle.skipped_reason = "more than " + std::to_string(options.oracle_max_qubits) + " qubits";
  } else if (!a.local_invariant.min_variance) {
    a.oracle.skipped_reason = "QubitBlochZero";
  } else {
    const auto dirs = bloch_directions(marginals);
    const double v = std::visit([&](const auto& s) { return run_oracle(s, dirs, options); }, state);
    a.oracle.brute_force_min_variance = v;
    a.oracle.residual = std::abs(v - *a.local_invariant.min_variance);
  }

  if (a.num_qubits == 2 && std::holds_alternative<PureState>(state)) {
    const auto& pure = std::get<PureState>(state);
    TwoQubitPure t;
    t.schmidt = schmidt(pure);
    t.concurrence = concurrence_pure(pure);
    t.from_concurrence = xi_from_concurrence(t.concurrence);
    a.two_qubit = t;
  }
  return a;
}

std::string to_json(const Analysis& a) {
  Json doc;
  doc["tool"] = {{"name", "spinsq"}, {"version", std::string(library_version())}};
  doc["input"] = {{"digest", "fnv1a64:" + a.input_digest},
                  {"kind", std::string(to_string(a.kind))},
                  {"num_qubits", a.num_qubits},
                  {"exchange_symmetric", a.exchange_symmetric}};
  doc["standard"] = squeezing_json(a.standard, true);

  Json local = squeezing_json(a.local_invariant, false);
  local["aligned_only_min"] = optional_number(a.aligned_only_min);
  local["optimized_min"] = optional_number(a.optimized_min);
  doc["local_invariant"] = std::move(local);

  if (a.symmetric) {
    doc["symmetric"] = squeezing_json(*a.symmetric, false);
  } else {
    doc["symmetric"] = nullptr;
    doc["symmetric_reason"] = "NotExchangeSymmetric";
  }

  doc["witness"] = {{"verdict", std::string(to_string(a.witness.verdict))},
                    {"xi2_tilde", optional_number(a.witness.xi2_tilde)},
                    {"invariant_I", optional_number(a.witness.invariant_I)},
                    {"squeezing_witness", a.witness.squeezing_witness},
                    {"pairwise_witness", a.witness.pairwise_witness},
                    {"details", a.witness.details}};

  if (a.invariant) {
    doc["invariant_I"] = {{"contraction", a.invariant->direct}, {"aligned", a.invariant->aligned},
                          {"s0", a.invariant->s0},         {"t_plus", a.invariant->t_plus},
                          {"t_minus", a.invariant->t_minus}};
  } else {
    doc["invariant_I"] = nullptr;
    doc["invariant_I_reason"] = a.num_qubits < 2 ? "SingleQubit" : "NotExchangeSymmetric";
  }
  if (a.identity) {
    doc["identity_imp1"] = {{"lhs", a.identity->lhs}, {"rhs", a.identity->rhs}, {"residual", a.identity->residual}};
  } else {
    doc["identity_imp1"] = nullptr;
    doc["identity_imp1_reason"] = !a.exchange_symmetric ? "NotExchangeSymmetric"
                                  : a.num_qubits < 2    ? "SingleQubit"
                                                        : "QubitBlochZero";
  }

  Json bloch = Json::array();
  for (const auto& v : a.bloch_vectors) bloch.push_back(vector_json(v));
  Json pairs = Json::array();
  for (const auto& p : a.pair_correlations) pairs.push_back({{"i", p.i}, {"j", p.j}, {"T", matrix_json(p.t)}});
  doc["marginals"] = {{"uniform", a.uniform_marginals}, {"bloch_vectors", std::move(bloch)},
                      {"pair_correlations", std::move(pairs)}};

  Json oracle;
  oracle["brute_force_min_variance"] = optional_number(a.oracle.brute_force_min_variance);
  oracle["residual"] = optional_number(a.oracle.residual);
  oracle["skipped_reason"] = a.oracle.skipped_reason.empty() ? Json(nullptr) : Json(a.oracle.skipped_reason);
  doc["oracle"] = std::move(oracle);

  if (a.two_qubit) {
    doc["two_qubit_pure"] = {{"lambda1", a.two_qubit->schmidt.lambda1},
                             {"lambda2", a.two_qubit->schmidt.lambda2},
                             {"concurrence", a.two_qubit->concurrence},
                             {"xi1_tilde_from_concurrence", a.two_qubit->from_concurrence.xi1_tilde},
                             {"xi2_tilde_from_concurrence", a.two_qubit->from_concurrence.xi2_tilde}};
  } else {
    doc["two_qubit_pure"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string to_text(const Analysis& a) {
  std::ostringstream os;
  os << "spinsq " << library_version() << "\n";
  os << "input: " << to_string(a.kind) << ", " << a.num_qubits << " qubits, digest fnv1a64:" << a.input_digest
     << (a.exchange_symmetric ? ", exchange symmetric" : "") << "\n\n";

  os << "collective frame\n";
  os << "  |<J>|          " << number_text(a.standard.mean_J0) << "\n";
  os << "  xi1            " << optional_text(a.standard.xi1, &a.standard) << "\n";
  os << "  xi2            " << optional_text(a.standard.xi2, &a.standard) << "\n";
  os << "  (dJ_perp)^2    " << optional_text(a.standard.min_variance, &a.standard) << "\n\n";

  os << "local frames\n";
  os << "  <J0>           " << number_text(a.local_invariant.mean_J0) << "\n";
  os << "  xi1~           " << optional_text(a.local_invariant.xi1_tilde, &a.local_invariant) << "\n";
  os << "  xi2~           " << optional_text(a.local_invariant.xi2_tilde, &a.local_invariant) << "\n";
  os << "  (dJ_perp)^2    " << optional_text(a.local_invariant.min_variance, &a.local_invariant) << "\n";
  if (a.aligned_only_min) os << "  S min, aligned only  " << number_text(*a.aligned_only_min) << "\n";
  if (a.optimized_min) os << "  S min, optimized     " << number_text(*a.optimized_min) << "\n";
  if (a.symmetric) {
    os << "  symmetric xi1~ " << optional_text(a.symmetric->xi1_tilde, a.symmetric ? &*a.symmetric : nullptr) << "\n";
    os << "  symmetric xi2~ " << optional_text(a.symmetric->xi2_tilde, &*a.symmetric) << "\n";
  }
  os << "\n";

  os << "witness: " << to_string(a.witness.verdict) << "\n  " << a.witness.details << "\n";
  if (a.invariant) {
    os << "  I = " << number_text(a.invariant->direct) << " (aligned route " << number_text(a.invariant->aligned)
       << "), t+ = " << number_text(a.invariant->t_plus) << ", t- = " << number_text(a.invariant->t_minus) << "\n";
  }
  if (a.identity) {
    os << "  I identity: lhs " << number_text(a.identity->lhs) << ", rhs " << number_text(a.identity->rhs)
       << ", residual " << number_text(a.identity->residual) << "\n";
  }
  os << "\n";

  os << "Bloch vectors" << (a.uniform_marginals ? " (shared by every qubit)" : "") << "\n";
  for (std::size_t q = 0; q < a.bloch_vectors.size(); ++q) os << "  " << q << ": " << vector_text(a.bloch_vectors[q]) << "\n";
  if (!a.pair_correlations.empty()) {
    os << "pair correlations" << (a.uniform_marginals ? " (shared by every pair)" : "") << "\n";
    for (const auto& p : a.pair_correlations) {
      os << "  T(" << p.i << "," << p.j << ") rows " << vector_text(p.t.row(0).transpose()) << " "
         << vector_text(p.t.row(1).transpose()) << " " << vector_text(p.t.row(2).transpose()) << "\n";
    }
  }
  os << "\n";

  if (a.oracle.brute_force_min_variance) {
    os << "oracle: brute-force min variance " << number_text(*a.oracle.brute_force_min_variance) << ", residual "
       << number_text(*a.oracle.residual) << "\n";
  } else {
    os << "oracle: skipped (" << a.oracle.skipped_reason << ")\n";
  }
  if (a.two_qubit) {
    os << "two-qubit pure: lambda = (" << number_text(a.two_qubit->schmidt.lambda1) << ", "
       << number_text(a.two_qubit->schmidt.lambda2) << "), C = " << number_text(a.two_qubit->concurrence)
       << ", sqrt(1-C) = " << number_text(a.two_qubit->from_concurrence.xi1_tilde)
       << ", 1/sqrt(1+C) = " << number_text(a.two_qubit->from_concurrence.xi2_tilde) << "\n";
  }
  return os.str();
}

}  // namespace spinsq
