#include "spinsq/state_file.hpp"

#include <string>

#include "json.hpp"

#include "spinsq/error.hpp"

namespace spinsq {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormatVersion = "1";

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vector_to_json(const Eigen::VectorXcd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ValidationError("state file field '" + field + "': " + message);
}

const Json& member(const Json& object, const char* key, const std::string& where) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!object.is_object()) fail(where.empty() ? "<root>" : where, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) fail(field, "missing");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

Complex complex_from(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) fail(field, "expected a [re, im] pair");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

Eigen::VectorXcd vector_from(const Json& j, std::size_t expected, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  if (j.size() != expected) {
    fail(field, "expected " + std::to_string(expected) + " entries, found " + std::to_string(j.size()));
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i)
    v[static_cast<Eigen::Index>(i)] = complex_from(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXcd matrix_from(const Json& j, std::size_t dim, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of rows");
  if (j.size() != dim) fail(field, "expected " + std::to_string(dim) + " rows, found " + std::to_string(j.size()));
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r)
    m.row(static_cast<Eigen::Index>(r)) = vector_from(j[r], dim, field + "[" + std::to_string(r) + "]").transpose();
  return m;
}

template <class Fn>
auto revalidate(const std::string& field, Fn&& build) {
  try {
    return build();
  } catch (const CapacityError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(field, e.what());
  }
}

Mixture mixture_from(const Json& j, int n) {
  if (!j.is_array() || j.empty()) fail("payload", "expected a non-empty array of mixture terms");
  Mixture terms;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string where = "payload[" + std::to_string(t) + "]";
    MixtureTerm term;
    term.weight = number(member(j[t], "weight", where), where + ".weight");
    const Json& factors = member(j[t], "factors", where);
    const std::string fwhere = where + ".factors";
    if (!factors.is_array() || factors.size() != static_cast<std::size_t>(n)) {
      fail(fwhere, "expected " + std::to_string(n) + " single-qubit density matrices");
    }
    for (std::size_t q = 0; q < factors.size(); ++q) {
      const std::string qwhere = fwhere + "[" + std::to_string(q) + "]";
      const Eigen::Matrix2cd rho = matrix_from(factors[q], 2, qwhere);
      revalidate(qwhere, [&] {
        validate_qubit_density(rho);
        return 0;
      });
      term.factors.push_back(rho);
    }
    terms.push_back(std::move(term));
  }
  return terms;
}

StateKind kind_from(const Json& j) {
  if (!j.is_string()) fail("kind", "expected a string");
  const auto& s = j.get_ref<const std::string&>();
  if (s == "pure") return StateKind::Pure;
  if (s == "density") return StateKind::Density;
  if (s == "symmetric") return StateKind::Symmetric;
  if (s == "mixture") return StateKind::Mixture;
  fail("kind", "unknown kind '" + s + "' (expected pure, density, symmetric or mixture)");
}

}  // namespace

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Pure:
      return "pure";
    case StateKind::Density:
      return "density";
    case StateKind::Symmetric:
      return "symmetric";
    case StateKind::Mixture:
      return "mixture";
  }
  return "unknown";
}

StateFile::StateFile(PureState state) : kind_(StateKind::Pure), state_(std::move(state)) {}
StateFile::StateFile(DensityMatrix state) : kind_(StateKind::Density), state_(std::move(state)) {}
StateFile::StateFile(SymmetricState state) : kind_(StateKind::Symmetric), state_(std::move(state)) {}

StateFile::StateFile(int num_qubits, Mixture terms)
    : kind_(StateKind::Mixture), state_(mix(terms)), mixture_(std::move(terms)) {
  if (spinsq::num_qubits(state_) != num_qubits) throw ValidationError("mixture factor count does not match num_qubits");
}

StateFile StateFile::parse(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("state file is not valid JSON: ") + e.what());
  }
  const Json& version = member(doc, "format_version", "");
  if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
    fail("format_version", "expected \"1\"");
  }
  const StateKind kind = kind_from(member(doc, "kind", ""));
  const Json& nq = member(doc, "num_qubits", "");
  if (!nq.is_number_integer() || nq.get<long long>() < 1) fail("num_qubits", "expected a positive integer");
  const long long n_raw = nq.get<long long>();
  const Json& payload = member(doc, "payload", "");

  const auto limit = [&](int cap) {
    if (n_raw > cap) throw CapacityError("num_qubits " + std::to_string(n_raw) + " exceeds the limit of " +
                                         std::to_string(cap) + " for kind " + std::string(to_string(kind)));
  };
  switch (kind) {
    case StateKind::Pure: {
      limit(kMaxPureQubits);
      const int n = static_cast<int>(n_raw);
      auto amps = vector_from(payload, std::size_t{1} << n, "payload");
      return revalidate("payload", [&] { return StateFile(PureState(n, std::move(amps))); });
    }
    case StateKind::Density: {
      limit(kMaxDensityQubits);
      const int n = static_cast<int>(n_raw);
      auto m = matrix_from(payload, std::size_t{1} << n, "payload");
      return revalidate("payload", [&] { return StateFile(DensityMatrix(n, std::move(m))); });
    }
    case StateKind::Symmetric: {
      limit(kMaxSymmetricQubits);
      const int n = static_cast<int>(n_raw);
      auto amps = vector_from(payload, static_cast<std::size_t>(n) + 1, "payload");
      return revalidate("payload", [&] { return StateFile(SymmetricState(n, std::move(amps))); });
    }
    case StateKind::Mixture: {
      limit(kMaxDensityQubits);
      const int n = static_cast<int>(n_raw);
      auto terms = mixture_from(payload, n);
      return revalidate("payload", [&] { return StateFile(n, std::move(terms)); });
    }
  }
  fail("kind", "unsupported");
}

std::string StateFile::serialize() const {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = std::string(to_string(kind_));
  doc["num_qubits"] = num_qubits();
  switch (kind_) {
    case StateKind::Pure:
      doc["payload"] = vector_to_json(std::get<PureState>(state_).amplitudes());
      break;
    case StateKind::Density:
      doc["payload"] = matrix_to_json(std::get<DensityMatrix>(state_).matrix());
      break;
    case StateKind::Symmetric:
      doc["payload"] = vector_to_json(std::get<SymmetricState>(state_).dicke_amplitudes());
      break;
    case StateKind::Mixture: {
      Json terms = Json::array();
      for (const auto& term : *mixture_) {
        Json factors = Json::array();
        for (const auto& f : term.factors) factors.push_back(matrix_to_json(f));
        terms.push_back(Json{{"weight", term.weight}, {"factors", std::move(factors)}});
      }
      doc["payload"] = std::move(terms);
      break;
    }
  }
  return doc.dump() + "\n";
}

}  // namespace spinsq
