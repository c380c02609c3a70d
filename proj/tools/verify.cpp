#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spinsq/spinsq.hpp"

namespace spinsq::cli {
namespace {

constexpr double kPi = std::numbers::pi;

using Replay = std::function<std::vector<std::string>()>;

class Tracker {
 public:
  Tracker(std::string name, std::string label, bool track_minimum = false) : track_minimum_(track_minimum) {
    out_.name = std::move(name);
    out_.worst_label = std::move(label);
    out_.worst = track_minimum ? HUGE_VAL : 0.0;
  }

  void observe(double value, bool ok, const Replay& replay = {}) {
    ++out_.checked;
    out_.worst = track_minimum_ ? std::min(out_.worst, value) : std::max(out_.worst, value);
    if (!std::isfinite(value)) ok = false;
    if (ok) return;
    if (out_.failed++ == 0 && replay) out_.replay = replay();
  }

  /// Counts a failure that produced no value (e.g. an exception).
  void fail(const Replay& replay = {}) {
    ++out_.checked;
    if (out_.failed++ == 0 && replay) out_.replay = replay();
  }

  PropertyOutcome informational() {
    out_.informational = true;
    return result();
  }

  PropertyOutcome result() {
    if (out_.checked == 0 || !std::isfinite(out_.worst)) out_.worst = 0.0;
    return out_;
  }

 private:
  bool track_minimum_;
  PropertyOutcome out_;
};

std::string file_text(const StateFile& file) {
  std::string s = file.serialize();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string file_text(const AnyState& state) {
  return std::visit([](const auto& s) { return file_text(StateFile(s)); }, state);
}

AnyState transformed(const AnyState& state, const LocalUnitary& u) {
  return std::visit(
      [&](const auto& s) -> AnyState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SymmetricState>) {
          return apply_local_unitaries(embed_symmetric(s), u);
        } else {
          return apply_local_unitaries(s, u);
        }
      },
      state);
}

double min_bloch_norm(const Marginals& m) {
  double out = HUGE_VAL;
  for (int q = 0; q < m.num_qubits(); ++q) out = std::min(out, m.bloch(q).norm());
  return out;
}

double matrix_gap(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::string unitary_text(const LocalUnitary& u) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& m : u.per_qubit()) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < 2; ++r)
      rows.push_back({{m(r, 0).real(), m(r, 0).imag()}, {m(r, 1).real(), m(r, 1).imag()}});
    j.push_back(rows);
  }
  return "{\"local_unitary\":" + j.dump() + "}";
}

SuiteOutcome invariance(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  const int states = o.samples.value_or(200);
  const int unitaries = 20;
  const double tol = o.tolerance.value_or(1e-9);
  const double law_tol = o.tolerance.value_or(1e-10);

  Tracker xi1("xi1_tilde unchanged by random local unitaries", "max |delta|");
  Tracker xi2("xi2_tilde unchanged by random local unitaries", "max |delta|");
  Tracker bloch("Bloch vectors rotate as O_i s_i", "max |delta|");
  Tracker corr("pair correlations rotate as O_i T O_j^T", "max |delta|");
  Tracker standard("xi1 is not invariant: I (x) sigma_x maps undefined to sqrt(1 - sin(pi/4))", "|delta|");

  for (int k = 0; k < states; ++k) {
    const int n = 2 + k % 3;
    AnyState state = random_pure_state(n, rng);
    Marginals m = Marginals::of(state);
    while (true) {
      state = k % 2 == 0 ? AnyState(random_pure_state(n, rng))
                         : AnyState(random_separable_state(n, 1 + k % 4, rng()));
      m = Marginals::of(state);
      if (min_bloch_norm(m) > 1e-3) break;
    }
    const auto base = xi_tilde_general(m);
    for (int u_index = 0; u_index < unitaries; ++u_index) {
      const LocalUnitary u = random_local_unitary(n, rng);
      const AnyState moved = transformed(state, u);
      const Marginals mm = Marginals::of(moved);
      const auto r = xi_tilde_general(mm);
      const Replay replay = [&] { return std::vector<std::string>{file_text(state), unitary_text(u)}; };
      const double d1 = std::abs(*r.xi1_tilde - *base.xi1_tilde);
      const double d2 = std::abs(*r.xi2_tilde - *base.xi2_tilde);
      xi1.observe(d1, d1 < tol, replay);
      xi2.observe(d2, d2 < tol, replay);
      double bloch_gap = 0.0, corr_gap = 0.0;
      for (int i = 0; i < n; ++i) {
        const Eigen::Matrix3d oi = su2_to_so3(u[i]);
        bloch_gap = std::max(bloch_gap, (mm.bloch(i) - oi * m.bloch(i)).cwiseAbs().maxCoeff());
        for (int j = i + 1; j < n; ++j)
          corr_gap = std::max(corr_gap,
                              matrix_gap(mm.correlation(i, j), oi * m.correlation(i, j) * su2_to_so3(u[j]).transpose()));
      }
      bloch.observe(bloch_gap, bloch_gap < law_tol, replay);
      corr.observe(corr_gap, corr_gap < law_tol, replay);
    }
  }

  {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v[1] = std::cos(kPi / 8);
    v[2] = std::sin(kPi / 8);
    const PureState flipped(2, v);
    const LocalUnitary flip({Eigen::Matrix2cd::Identity(), pauli(0)});
    const auto before = xi_standard(flipped);
    const auto after = xi_standard(apply_local_unitaries(flipped, flip));
    const double expected = std::sqrt(1.0 - std::sin(kPi / 4));
    const double gap = after.xi1 ? std::abs(*after.xi1 - expected) : HUGE_VAL;
    standard.observe(gap, !before.xi1 && gap < 1e-12, [&] { return std::vector<std::string>{file_text(StateFile(flipped))}; });
  }

  return {"invariance", o.seed, {xi1.result(), xi2.result(), bloch.result(), corr.result(), standard.result()}};
}

SuiteOutcome separable_bound(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  const int samples = o.samples.value_or(500);
  const double tol = o.tolerance.value_or(1e-9);
  Tracker bound("xi2_tilde >= 1 on random separable states", "min xi2_tilde", true);
  Tracker verdict("witness never reports Entangled on separable states", "min xi2_tilde", true);
  Tracker undefined("samples skipped for a zero Bloch vector (xi2_tilde undefined)", "");

  for (int k = 0; k < samples; ++k) {
    const int n = 2 + k % 4;
    const int terms = 1 + k % 8;
    const std::uint64_t seed = rng();
    const Mixture mixture = random_separable_mixture(n, terms, seed);
    const DensityMatrix rho = mix(mixture);
    const Marginals m = Marginals::of(rho);
    const Replay replay = [&] { return std::vector<std::string>{file_text(StateFile(n, mixture))}; };
    const auto r = xi_tilde_general(m);
    if (!r.xi2_tilde) {
      undefined.observe(1.0, true);
      continue;
    }
    bound.observe(*r.xi2_tilde, *r.xi2_tilde >= 1.0 - tol, replay);
    const auto w = witness(m);
    verdict.observe(*r.xi2_tilde, w.verdict != Verdict::Entangled && !w.squeezing_witness, replay);
  }
  return {"separable-bound", o.seed, {bound.result(), verdict.result(), undefined.informational()}};
}

Eigen::Matrix3d random_symmetric_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix3d m;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m(a, b) = u(rng);
  return 0.5 * (m + m.transpose());
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v;
  do v = Eigen::Vector3d(g(rng), g(rng), g(rng));
  while (v.norm() < 1e-8);
  return v.normalized();
}

SuiteOutcome oracle(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  const double tol = o.tolerance.value_or(1e-6);
  Tracker qfm("quadratic_form_min matches a 10^4-point angle grid", "max |delta|");
  Tracker sym("brute-force independent angles match xi_tilde_general (symmetric states, N <= 4)", "max |delta|");
  Tracker general("brute-force independent angles match xi_tilde_general (random pure states, N <= 3)", "max |delta|");
  Tracker gap("common-direction closed form minus independent-angle minimum (flagged above 1e-6)", "max gap");

  const int matrices = o.samples.value_or(100);
  for (int k = 0; k < matrices; ++k) {
    const Eigen::Matrix3d m = random_symmetric_matrix(rng);
    const Direction n0(random_unit(rng));
    const Frame f = complete_frame(n0);
    double grid = HUGE_VAL;
    for (int p = 0; p < 10000; ++p) {
      const double phi = kPi * p / 10000;
      const Eigen::Vector3d d = std::cos(phi) * f.n_perp().vector() + std::sin(phi) * f.n_perp_prime().vector();
      grid = std::min(grid, d.dot(m * d));
    }
    const double d = std::abs(quadratic_form_min(m, n0).value - grid);
    qfm.observe(d, d < tol, [&] {
      std::ostringstream os;
      os.precision(17);
      os << "{\"matrix\":[[" << m(0, 0) << "," << m(0, 1) << "," << m(0, 2) << "],[" << m(1, 0) << "," << m(1, 1)
         << "," << m(1, 2) << "],[" << m(2, 0) << "," << m(2, 1) << "," << m(2, 2) << "]],\"n0\":[" << n0[0] << ","
         << n0[1] << "," << n0[2] << "]}";
      return std::vector<std::string>{os.str()};
    });
  }

  const int states = o.samples.value_or(50);
  for (int k = 0; k < states; ++k) {
    const int n = 2 + k % 3;
    SymmetricState s = random_symmetric_state(n, rng);
    while (Marginals::of(s).bloch(0).norm() <= 1e-3) s = random_symmetric_state(n, rng);
    const Marginals m = Marginals::of(s);
    const double bf = brute_force_min_variance(s, bloch_directions(m), 128, rng());
    const auto g = xi_tilde_general(m);
    const double d = std::abs(bf - *g.min_variance);
    sym.observe(d, d < tol, [&] { return std::vector<std::string>{file_text(StateFile(s))}; });
    const double closed = *xi_tilde_symmetric(m).min_variance;
    gap.observe(closed - bf, closed - bf <= 1e-6);
  }

  const int pure = o.samples.value_or(20);
  for (int k = 0; k < pure; ++k) {
    const int n = 2 + k % 2;
    PureState psi = random_pure_state(n, rng);
    while (min_bloch_norm(Marginals::of(psi)) <= 1e-3) psi = random_pure_state(n, rng);
    const Marginals m = Marginals::of(psi);
    const double bf = brute_force_min_variance(psi, bloch_directions(m), 128, rng());
    const double d = std::abs(bf - *xi_tilde_general(m).min_variance);
    general.observe(d, d < tol, [&] { return std::vector<std::string>{file_text(StateFile(psi))}; });
  }

  return {"oracle", o.seed, {qfm.result(), sym.result(), general.result(), gap.informational()}};
}

SuiteOutcome identities(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  const int samples = o.samples.value_or(200);
  const double tol = o.tolerance.value_or(1e-9);
  const double tight = o.tolerance.value_or(1e-10);

  Tracker imp1("I = 2 s0^2 t+ (xi1_tilde^2 - 1)/(N - 1) on random symmetric states", "max residual");
  Tracker routes("contraction and aligned-eigenvalue routes for I agree", "max |delta|");
  Tracker trace("Tr T = 1 on symmetric states", "max |Tr T - 1|");
  Tracker tplus("t+ >= 0 on symmetric states", "min t+", true);
  Tracker sign("sign(I) = sign(xi1_tilde - 1) when |xi1_tilde - 1| > 1e-6", "mismatches");
  Tracker hand("I = -0.5 for cos(pi/8)|00> + sin(pi/8)|11>", "|delta|");
  Tracker dicke("Dicke-basis pair correlations match the full-vector path (N <= 10)", "max |delta|");
  Tracker conc1("xi1_tilde = sqrt(1 - C) on Haar-random two-qubit states", "max |delta|");
  Tracker conc2("xi2_tilde = 1/sqrt(1 + C) on Haar-random two-qubit states", "max |delta|");

  for (int k = 0; k < samples; ++k) {
    const int n = 2 + k % 5;
    const AnyState state = k % 2 == 0 ? AnyState(random_symmetric_state(n, rng))
                                      : AnyState(random_symmetric_mixed_state(n, 1 + k % 3, rng));
    const Marginals m = Marginals::of(state);
    const Replay replay = [&] { return std::vector<std::string>{file_text(state)}; };
    InvariantParts parts;
    try {
      parts = invariant_parts(m);
    } catch (const ConsistencyError&) {
      routes.fail(replay);
      continue;
    }
    const double route_gap = std::abs(parts.direct - parts.aligned);
    routes.observe(route_gap, route_gap < tol, replay);
    const Eigen::Matrix3d t = m.correlation(0, 1);
    const double tr = std::abs(t.trace() - 1.0);
    trace.observe(tr, tr < tight, replay);
    tplus.observe(parts.t_plus, parts.t_plus >= -tight, replay);
    if (const auto check = verify_identity_imp1(m)) imp1.observe(check->residual, check->residual < tol, replay);
    const double xi1 = *xi_tilde_symmetric(m).xi1_tilde;
    if (std::abs(xi1 - 1.0) > 1e-6) {
      const bool agree = (parts.direct < 0) == (xi1 < 1);
      sign.observe(agree ? 0.0 : 1.0, agree, replay);
    }
  }

  {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v[0] = std::cos(kPi / 8);
    v[3] = std::sin(kPi / 8);
    const double d = std::abs(invariant_I(PureState(2, v)) + 0.5);
    hand.observe(d, d < 1e-12);
  }

  const int per_size = std::max(1, samples / 50);
  for (int n = 2; n <= 10; ++n)
    for (int k = 0; k < per_size; ++k) {
      const SymmetricState s = random_symmetric_state(n, rng);
      const double d = matrix_gap(collective_to_pair_correlations(s).entries,
                                  correlation_matrix(embed_symmetric(s), 0, n - 1).entries);
      dicke.observe(d, d < tight, [&] { return std::vector<std::string>{file_text(StateFile(s))}; });
    }

  const int pairs = o.samples ? *o.samples * 5 : 1000;
  for (int k = 0; k < pairs; ++k) {
    const PureState psi = random_pure_state(2, rng);
    const double c = concurrence_pure(psi);
    const auto r = xi_tilde_general(psi);
    const Replay replay = [&] { return std::vector<std::string>{file_text(StateFile(psi))}; };
    if (!r.xi1_tilde) {
      conc1.fail(replay);
      continue;
    }
    const double d1 = std::abs(*r.xi1_tilde - std::sqrt(1.0 - c));
    const double d2 = std::abs(*r.xi2_tilde - 1.0 / std::sqrt(1.0 + c));
    conc1.observe(d1, d1 < tol, replay);
    conc2.observe(d2, d2 < tol, replay);
  }

  return {"identities",
          o.seed,
          {imp1.result(), routes.result(), trace.result(), tplus.result(), sign.result(), hand.result(), dicke.result(),
           conc1.result(), conc2.result()}};
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

bool SuiteOutcome::passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyOutcome& p) { return p.informational || p.failed == 0; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"invariance", "separable-bound", "oracle", "identities"};
  return names;
}

SuiteOutcome run_suite(std::string_view suite, const VerifyOptions& options) {
  if (suite == "invariance") return invariance(options);
  if (suite == "separable-bound") return separable_bound(options);
  if (suite == "oracle") return oracle(options);
  if (suite == "identities") return identities(options);
  throw std::invalid_argument("unknown verification suite '" + std::string(suite) + "'");
}

std::string to_text(const SuiteOutcome& outcome) {
  std::ostringstream os;
  os << "suite " << outcome.suite << " (seed " << outcome.seed << ")\n";
  for (const auto& p : outcome.properties) {
    const char* tag = p.informational ? "INFO" : (p.failed == 0 ? "PASS" : "FAIL");
    os << "  " << tag << "  " << p.name << ": " << p.checked << (p.informational ? " observed" : " checked");
    if (p.informational && p.failed > 0) os << ", " << p.failed << " flagged";
    if (!p.informational) os << ", " << p.failed << " failed";
    if (p.checked > 0 && !p.worst_label.empty()) os << ", " << p.worst_label << " = " << number(p.worst);
    os << "\n";
    for (const auto& line : p.replay) os << "        replay: " << line << "\n";
  }
  os << "result: " << (outcome.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string to_json(const SuiteOutcome& outcome) {
  using Json = nlohmann::ordered_json;
  Json doc;
  doc["suite"] = outcome.suite;
  doc["seed"] = outcome.seed;
  doc["passed"] = outcome.passed();
  Json props = Json::array();
  for (const auto& p : outcome.properties) {
    Json replay = Json::array();
    for (const auto& line : p.replay) replay.push_back(Json::parse(line));
    props.push_back({{"name", p.name},
                     {"checked", p.checked},
                     {"failed", p.failed},
                     {"worst", p.worst},
                     {"worst_label", p.worst_label},
                     {"informational", p.informational},
                     {"replay", std::move(replay)}});
  }
  doc["properties"] = std::move(props);
  return doc.dump(2) + "\n";
}

}  // namespace spinsq::cli
