#include "cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinsq/spinsq.hpp"
#include "verify.hpp"

namespace spinsq::cli {
namespace {

/// Input/output failures; reported with exit code 2 like validation errors.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string output;
  std::uint64_t seed = 1;
  std::string format = "text";
  bool machine() const { return format == "machine"; }
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read input file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const Globals& g, const std::string& content, std::ostream& out) {
  if (g.output.empty() || g.output == "-") {
    out << content;
    return;
  }
  std::ofstream file(g.output, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write output file '" + g.output + "'");
  file << content;
  file.close();
  if (!file) throw IoError("failed writing output file '" + g.output + "'");
}

PureState schmidt_pair(double theta) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v[0] = std::cos(theta);
  v[3] = std::sin(theta);
  return PureState(2, v);
}

/// "theta:phi,theta:phi,..." with Bloch-sphere angles per qubit.
PureState product_from_angles(const std::string& text) {
  std::vector<Spinor> factors;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ValidationError("--angles: expected theta:phi, got '" + item + "'");
    double theta = 0.0, phi = 0.0;
    try {
      std::size_t used = 0;
      const std::string a = item.substr(0, colon), b = item.substr(colon + 1);
      theta = std::stod(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      phi = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      throw ValidationError("--angles: cannot parse '" + item + "'");
    }
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw ValidationError("--angles: non-finite angle");
    factors.emplace_back(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
  }
  if (factors.empty()) throw ValidationError("--angles: no qubits given");
  return product_state(factors);
}

std::string cell(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string sweep_row(double parameter, const AnyState& state) {
  const auto standard = xi_standard(state);
  const Marginals m = Marginals::of(state);
  const auto tilde = xi_tilde_general(m);
  std::optional<double> c;
  if (num_qubits(state) == 2) {
    if (const auto* p = std::get_if<PureState>(&state)) c = concurrence_pure(*p);
    if (const auto* s = std::get_if<SymmetricState>(&state)) c = concurrence_pure(embed_symmetric(*s));
  }
  std::optional<double> inv;
  if (num_qubits(state) >= 2 && m.exchange_symmetric()) {
    try {
      inv = invariant_I(m);
    } catch (const Error&) {
    }
  }
  return cell(parameter) + "," + cell(standard.xi1) + "," + cell(standard.xi2) + "," + cell(tilde.xi1_tilde) + "," +
         cell(tilde.xi2_tilde) + "," + cell(c) + "," + cell(inv) + "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-squeezing parameters, local invariants and entanglement witnesses for multiqubit states",
               "spinsq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  Globals g;
  app.add_option("--output,-o", g.output, "Write results to this file instead of standard output");
  app.add_option("--seed", g.seed, "Seed for random generation and verification")->capture_default_str();
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();

  std::function<int()> action;

  // analyze
  std::string input;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a state file ('-' reads standard input)");
  analyze_cmd->fallthrough();
  analyze_cmd->add_option("input", input, "State file")->required();
  analyze_cmd->callback([&] {
    action = [&] {
      const std::string bytes = read_input(input);
      const StateFile file = StateFile::parse(bytes);
      AnalysisOptions options;
      options.seed = g.seed;
      const Analysis a = analyze(file, bytes, options);
      emit(g, g.machine() ? to_json(a) : to_text(a), out);
      return kExitOk;
    };
  });

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "Write a state file");
  generate_cmd->fallthrough();
  generate_cmd->require_subcommand(1);
  int n = 0, k = 0, terms = 0;
  double theta = 0.0, phi = 0.0, mu = 0.0;
  std::string angles;
  auto write_state = [&](const StateFile& f) {
    emit(g, f.serialize(), out);
    return kExitOk;
  };
  auto* gen_css = generate_cmd->add_subcommand("css", "Coherent spin state (symmetric)");
  gen_css->add_option("--n", n, "Number of qubits")->required();
  gen_css->add_option("--theta", theta, "Polar angle")->required();
  gen_css->add_option("--phi", phi, "Azimuthal angle")->required();
  gen_css->callback([&] { action = [&] { return write_state(StateFile(coherent_spin_state(n, theta, phi))); }; });

  auto* gen_twisted = generate_cmd->add_subcommand("twisted", "One-axis-twisted state (symmetric)");
  gen_twisted->add_option("--n", n, "Number of qubits")->required();
  gen_twisted->add_option("--mu", mu, "Twisting strength")->required();
  gen_twisted->callback([&] { action = [&] { return write_state(StateFile(one_axis_twisted_state(n, mu))); }; });

  auto* gen_product = generate_cmd->add_subcommand("product", "Product of single-qubit pure states");
  gen_product->add_option("--angles", angles, "Per-qubit Bloch angles theta:phi, comma separated")->required();
  gen_product->callback([&] { action = [&] { return write_state(StateFile(product_from_angles(angles))); }; });

  auto* gen_random = generate_cmd->add_subcommand("random-separable", "Seeded random separable mixture");
  gen_random->add_option("--n", n, "Number of qubits")->required();
  gen_random->add_option("--terms", terms, "Number of product terms")->required();
  gen_random->callback(
      [&] { action = [&] { return write_state(StateFile(n, random_separable_mixture(n, terms, g.seed))); }; });

  auto* gen_dicke = generate_cmd->add_subcommand("dicke", "Dicke state with k qubits in |0>");
  gen_dicke->add_option("--n", n, "Number of qubits")->required();
  gen_dicke->add_option("--k", k, "Excitation number")->required();
  gen_dicke->callback([&] { action = [&] { return write_state(StateFile(dicke_state(n, k))); }; });

  auto* gen_schmidt = generate_cmd->add_subcommand("schmidt", "cos(theta)|00> + sin(theta)|11>");
  gen_schmidt->add_option("--theta", theta, "Schmidt angle")->required();
  gen_schmidt->callback([&] { action = [&] { return write_state(StateFile(schmidt_pair(theta))); }; });

  for (auto* sub : generate_cmd->get_subcommands({})) sub->fallthrough();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate parameters over a one-parameter family as CSV");
  sweep_cmd->fallthrough();
  sweep_cmd->require_subcommand(1);
  double from = 0.0, to = 0.0;
  int points = 0;
  auto add_range = [&](CLI::App* sub) {
    sub->add_option("--from", from, "First parameter value")->required();
    sub->add_option("--to", to, "Last parameter value")->required();
    sub->add_option("--points", points, "Number of evenly spaced values")->required();
    sub->fallthrough();
  };
  auto sweep = [&](const std::function<AnyState(double)>& family) {
    if (!std::isfinite(from) || !std::isfinite(to)) throw ValidationError("sweep: range bounds must be finite");
    if (points < 1) throw ValidationError("sweep: --points must be at least 1");
    if (points == 1 && from != to) throw ValidationError("sweep: a single point needs --from equal to --to");
    if (to < from) throw ValidationError("sweep: --to must not be below --from");
    std::string csv = "parameter,xi1,xi2,xi1_tilde,xi2_tilde,concurrence,invariant_I\n";
    for (int i = 0; i < points; ++i) {
      const double x = points == 1 ? from : (i == points - 1 ? to : from + (to - from) * i / (points - 1));
      csv += sweep_row(x, family(x));
    }
    emit(g, csv, out);
    return kExitOk;
  };
  auto* sweep_schmidt = sweep_cmd->add_subcommand("schmidt", "Schmidt angle theta of cos|00> + sin|11>");
  add_range(sweep_schmidt);
  sweep_schmidt->callback([&] { action = [&] { return sweep([](double t) { return AnyState(schmidt_pair(t)); }); }; });
  auto* sweep_twisted = sweep_cmd->add_subcommand("twisted", "Twisting strength mu at fixed N");
  add_range(sweep_twisted);
  sweep_twisted->add_option("--n", n, "Number of qubits")->required();
  sweep_twisted->callback(
      [&] { action = [&] { return sweep([&](double m) { return AnyState(one_axis_twisted_state(n, m)); }); }; });
  auto* sweep_css = sweep_cmd->add_subcommand("css", "Polar angle theta of a coherent spin state (phi = 0)");
  add_range(sweep_css);
  sweep_css->add_option("--n", n, "Number of qubits")->required();
  sweep_css->callback(
      [&] { action = [&] { return sweep([&](double t) { return AnyState(coherent_spin_state(n, t, 0.0)); }); }; });

  // verify
  std::string suite;
  std::optional<int> samples;
  std::optional<double> tolerance;
  auto* verify_cmd = app.add_subcommand("verify", "Run a seeded property suite");
  verify_cmd->fallthrough();
  verify_cmd->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--samples", samples, "Override the sample count")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tolerance", tolerance, "Override every pass threshold")->check(CLI::NonNegativeNumber);
  verify_cmd->callback([&] {
    action = [&] {
      const SuiteOutcome outcome = run_suite(suite, {g.seed, samples, tolerance});
      emit(g, g.machine() ? to_json(outcome) : to_text(outcome), out);
      return outcome.passed() ? kExitOk : kExitVerifyFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "spinsq: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const Error& e) {
    err << "spinsq: " << e.what() << "\n";
  } catch (const IoError& e) {
    err << "spinsq: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "spinsq: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace spinsq::cli
