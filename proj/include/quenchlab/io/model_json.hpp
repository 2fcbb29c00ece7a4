#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "quenchlab/model.hpp"

namespace quenchlab::io {

using nlohmann::json;

/// Schema violation at a JSON pointer inside the document.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : std::runtime_error(message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

namespace detail {

inline const json& require(const json& obj, const std::string& key, const std::string& at) {
  if (!obj.is_object()) throw SchemaError(at, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(at, "missing required key \"" + key + "\"");
  return *it;
}

inline long long as_int(const json& v, const std::string& at) {
  if (!v.is_number_integer()) throw SchemaError(at, "expected an integer");
  return v.get<long long>();
}

inline double as_number(const json& v, const std::string& at) {
  if (!v.is_number()) throw SchemaError(at, "expected a number");
  return v.get<double>();
}

inline const std::string& as_string(const json& v, const std::string& at) {
  if (!v.is_string()) throw SchemaError(at, "expected a string");
  return v.get_ref<const std::string&>();
}

inline std::vector<int> as_int_list(const json& v, const std::string& at) {
  if (!v.is_array()) throw SchemaError(at, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(static_cast<int>(as_int(v[i], at + "/" + std::to_string(i))));
  return out;
}

inline double number_or(const json& obj, const std::string& key, double fallback, const std::string& at) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, at + "/" + key);
}

inline BasisKind parse_basis(const json& v, const std::string& at) {
  const auto& s = as_string(v, at);
  if (s == "spin_product") return BasisKind::SpinProduct;
  if (s == "potts_delta") return BasisKind::PottsDelta;
  if (s == "occupation_product") return BasisKind::OccupationProduct;
  throw SchemaError(at, "unknown basis \"" + s + "\"");
}

}  // namespace detail

inline SiteLattice parse_lattice(const json& v, const std::string& at) {
  const auto d = detail::as_int(detail::require(v, "d", at), at + "/d");
  const auto sides = detail::as_int_list(detail::require(v, "sides", at), at + "/sides");
  try {
    return SiteLattice(static_cast<int>(d), sides);
  } catch (const InvalidArgument& e) {
    throw SchemaError(at, e.what());
  }
}

inline SpinSpace parse_spins(const json& v, const std::string& at) {
  const auto& kind = detail::as_string(detail::require(v, "kind", at), at + "/kind");
  if (kind == "ising") return SpinSpace::ising();
  if (kind == "gas") return SpinSpace::lattice_gas();
  if (kind == "potts") {
    const auto q = detail::as_int(detail::require(v, "q", at), at + "/q");
    if (q < 2) throw SchemaError(at + "/q", "Potts models need q >= 2");
    return SpinSpace::potts(static_cast<int>(q));
  }
  throw SchemaError(at + "/kind", "unknown spin kind \"" + kind + "\"");
}

/// Builds a model from {"lattice", "spins"?, "family", "c"?, "alpha"?, "terms"?}.
/// Builder errors (e.g. alpha <= 1/2) propagate with their own types.
inline DisorderModel parse_model(const json& v, const std::string& at = "") {
  if (!v.is_object()) throw SchemaError(at, "model must be an object");
  const SiteLattice lattice = parse_lattice(detail::require(v, "lattice", at), at + "/lattice");
  const auto& family = detail::as_string(detail::require(v, "family", at), at + "/family");
  const bool has_spins = v.contains("spins");
  const SpinSpace spins = has_spins ? parse_spins(v["spins"], at + "/spins") : SpinSpace::ising();
  auto expect_spins = [&](SpinKind kind) {
    if (has_spins && spins.kind != kind)
      throw SchemaError(at + "/spins", "spin kind does not match family \"" + family + "\"");
  };
  const double c = detail::number_or(v, "c", 1.0, at);

  if (family == "ea_nn") {
    expect_spins(SpinKind::Ising);
    return build_ea_nearest_neighbor(lattice, c);
  }
  if (family == "ea_powerlaw") {
    expect_spins(SpinKind::Ising);
    const double alpha = detail::as_number(detail::require(v, "alpha", at), at + "/alpha");
    return build_ea_power_law(lattice, alpha);
  }
  if (family == "potts") {
    if (!has_spins) throw SchemaError(at, "potts family needs \"spins\" with q");
    expect_spins(SpinKind::Potts);
    return build_potts(lattice, spins.q, c);
  }
  if (family == "gas") {
    expect_spins(SpinKind::LatticeGas);
    return build_lattice_gas(lattice, c);
  }
  if (family == "ferro") {
    expect_spins(SpinKind::Ising);
    return build_ferromagnet(lattice);
  }
  if (family == "custom") {
    if (!has_spins) throw SchemaError(at, "custom family needs \"spins\"");
    const auto& terms = detail::require(v, "terms", at);
    if (!terms.is_array()) throw SchemaError(at + "/terms", "expected an array of terms");
    std::vector<InteractionTerm> list;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tat = at + "/terms/" + std::to_string(i);
      InteractionTerm term;
      term.support = detail::as_int_list(detail::require(terms[i], "support", tat), tat + "/support");
      term.variance = detail::as_number(detail::require(terms[i], "variance", tat), tat + "/variance");
      term.basis = detail::parse_basis(detail::require(terms[i], "basis", tat), tat + "/basis");
      list.push_back(std::move(term));
    }
    try {
      return DisorderModel(lattice, spins, std::move(list), false, "custom");
    } catch (const InvalidArgument& e) {
      throw SchemaError(at + "/terms", e.what());
    }
  }
  throw SchemaError(at + "/family", "unknown family \"" + family + "\"");
}

}  // namespace quenchlab::io
