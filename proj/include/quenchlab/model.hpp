#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quenchlab/error.hpp"
#include "quenchlab/lattice.hpp"

namespace quenchlab {

enum class SpinKind { Ising, Potts, LatticeGas };

/// Single-site state space with the uniform a priori measure.
struct SpinSpace {
  SpinKind kind = SpinKind::Ising;
  int q = 2;  // number of Potts colours; ignored otherwise

  static SpinSpace ising() { return {SpinKind::Ising, 2}; }
  static SpinSpace lattice_gas() { return {SpinKind::LatticeGas, 2}; }
  static SpinSpace potts(int colours) {
    if (colours < 2) throw InvalidArgument("Potts models need q >= 2");
    return {SpinKind::Potts, colours};
  }

  int cardinality() const { return kind == SpinKind::Potts ? q : 2; }

  /// Value of the k-th state, k in [0, cardinality).
  int value(int k) const {
    switch (kind) {
      case SpinKind::Ising: return k == 0 ? -1 : 1;
      case SpinKind::Potts: return k + 1;
      case SpinKind::LatticeGas: return k;
    }
    return 0;
  }

  bool is_legal(int v) const {
    switch (kind) {
      case SpinKind::Ising: return v == -1 || v == 1;
      case SpinKind::Potts: return v >= 1 && v <= q;
      case SpinKind::LatticeGas: return v == 0 || v == 1;
    }
    return false;
  }

  bool operator==(const SpinSpace&) const = default;
};

using SpinConfiguration = std::vector<int>;

enum class BasisKind { SpinProduct, PottsDelta, OccupationProduct };

inline const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::SpinProduct: return "spin_product";
    case BasisKind::PottsDelta: return "potts_delta";
    case BasisKind::OccupationProduct: return "occupation_product";
  }
  return "?";
}

inline bool basis_matches(BasisKind basis, SpinKind spins) {
  switch (basis) {
    case BasisKind::SpinProduct: return spins == SpinKind::Ising;
    case BasisKind::PottsDelta: return spins == SpinKind::Potts;
    case BasisKind::OccupationProduct: return spins == SpinKind::LatticeGas;
  }
  return false;
}

/// Phi_X evaluated on the spin values of the support, in support order.
inline double evaluate_basis(BasisKind kind, std::span<const int> values) {
  switch (kind) {
    case BasisKind::SpinProduct: {
      int prod = 1;
      for (int v : values) prod *= v;
      return prod;
    }
    case BasisKind::PottsDelta:
      return std::all_of(values.begin(), values.end(), [&](int v) { return v == values.front(); })
                 ? 1.0
                 : 0.0;
    case BasisKind::OccupationProduct: {
      int prod = 1;
      for (int v : values) prod *= v;
      return prod;
    }
  }
  return 0.0;
}

struct InteractionTerm {
  std::vector<SiteIndex> support;  // strictly increasing
  double variance = 0.0;           // Delta^2_X
  BasisKind basis = BasisKind::SpinProduct;

  double phi(const SpinConfiguration& sigma) const {
    if (basis == BasisKind::PottsDelta) {
      const int first = sigma[support.front()];
      for (SiteIndex s : support)
        if (sigma[s] != first) return 0.0;
      return 1.0;
    }
    int prod = 1;
    for (SiteIndex s : support) prod *= sigma[s];
    return prod;
  }

  bool contained_in(const std::vector<bool>& mask) const {
    return std::all_of(support.begin(), support.end(), [&](SiteIndex i) { return mask[i]; });
  }

  bool operator==(const InteractionTerm&) const = default;
};

/// Lattice, spin space and the list of random interaction terms of
/// U(J, sigma) = sum_X J_X Phi_X(sigma_X). A deterministic model carries the
/// fixed coupling J_X = 1 on every term instead of a Gaussian law.
class DisorderModel {
 public:
  DisorderModel(SiteLattice lattice, SpinSpace spins, std::vector<InteractionTerm> terms,
                bool deterministic = false, std::string family = "custom")
      : lattice_(std::move(lattice)),
        spins_(spins),
        terms_(std::move(terms)),
        deterministic_(deterministic),
        family_(std::move(family)) {
    std::set<std::pair<std::vector<SiteIndex>, BasisKind>> seen;
    for (const auto& term : terms_) {
      if (term.support.empty()) throw InvalidArgument("interaction support must be non-empty");
      for (std::size_t k = 0; k < term.support.size(); ++k) {
        const SiteIndex s = term.support[k];
        if (s < 0 || s >= lattice_.size()) throw InvalidArgument("interaction support outside lattice");
        if (k > 0 && term.support[k - 1] >= s)
          throw InvalidArgument("interaction support must be strictly increasing");
      }
      if (!(term.variance >= 0.0) || !std::isfinite(term.variance))
        throw InvalidArgument("interaction variance must be finite and >= 0");
      if (!basis_matches(term.basis, spins_.kind))
        throw InvalidArgument(std::string("basis ") + to_string(term.basis) +
                              " does not match the spin space");
      if (!seen.emplace(term.support, term.basis).second)
        throw InvalidArgument("duplicate interaction support");
    }
  }

  const SiteLattice& lattice() const { return lattice_; }
  const SpinSpace& spins() const { return spins_; }
  const std::vector<InteractionTerm>& terms() const { return terms_; }
  const InteractionTerm& term(std::size_t k) const { return terms_.at(k); }
  bool deterministic() const { return deterministic_; }
  const std::string& family() const { return family_; }

  int site_count() const { return lattice_.size(); }
  int term_count() const { return static_cast<int>(terms_.size()); }

  std::vector<double> variances() const {
    std::vector<double> v;
    v.reserve(terms_.size());
    for (const auto& t : terms_) v.push_back(t.variance);
    return v;
  }

  bool is_legal(const SpinConfiguration& sigma) const {
    return static_cast<int>(sigma.size()) == site_count() &&
           std::all_of(sigma.begin(), sigma.end(), [&](int v) { return spins_.is_legal(v); });
  }

 private:
  SiteLattice lattice_;
  SpinSpace spins_;
  std::vector<InteractionTerm> terms_;
  bool deterministic_ = false;
  std::string family_;
};

namespace detail {

inline void require_positive(double c, const char* what) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument(std::string(what) + " must be > 0");
}

inline std::vector<InteractionTerm> pair_terms(const std::vector<SitePair>& pairs, double variance,
                                               BasisKind basis) {
  std::vector<InteractionTerm> terms;
  terms.reserve(pairs.size());
  for (auto [i, j] : pairs) terms.push_back({{i, j}, variance, basis});
  return terms;
}

}  // namespace detail

inline DisorderModel build_ea_nearest_neighbor(const SiteLattice& lattice, double c) {
  detail::require_positive(c, "coupling scale c");
  return DisorderModel(lattice, SpinSpace::ising(),
                       detail::pair_terms(lattice.nearest_neighbor_pairs(), c * c,
                                          BasisKind::SpinProduct),
                       false, "ea_nn");
}

/// All pairs, variance |n - n'|^(-2 d alpha) with Euclidean distance.
inline DisorderModel build_ea_power_law(const SiteLattice& lattice, double alpha) {
  if (!(alpha > 0.5))
    throw StabilityViolation("power-law couplings are summable only for alpha > 1/2");
  std::vector<InteractionTerm> terms;
  const double exponent = -2.0 * lattice.dimension() * alpha;
  for (auto [i, j] : lattice.all_pairs())
    terms.push_back({{i, j}, std::pow(lattice.distance(i, j), exponent), BasisKind::SpinProduct});
  return DisorderModel(lattice, SpinSpace::ising(), std::move(terms), false, "ea_powerlaw");
}

inline DisorderModel build_potts(const SiteLattice& lattice, int q, double c) {
  auto spins = SpinSpace::potts(q);
  detail::require_positive(c, "coupling scale c");
  return DisorderModel(lattice, spins,
                       detail::pair_terms(lattice.nearest_neighbor_pairs(), c * c,
                                          BasisKind::PottsDelta),
                       false, "potts");
}

inline DisorderModel build_lattice_gas(const SiteLattice& lattice, double c) {
  detail::require_positive(c, "coupling scale c");
  return DisorderModel(lattice, SpinSpace::lattice_gas(),
                       detail::pair_terms(lattice.nearest_neighbor_pairs(), c * c,
                                          BasisKind::OccupationProduct),
                       false, "gas");
}

/// Nearest-neighbour ferromagnet with J_X = 1 fixed, so U = +sum sigma sigma'.
/// The variance slot holds 1 so that variance-weighted sums count bonds.
inline DisorderModel build_ferromagnet(const SiteLattice& lattice) {
  return DisorderModel(lattice, SpinSpace::ising(),
                       detail::pair_terms(lattice.nearest_neighbor_pairs(), 1.0,
                                          BasisKind::SpinProduct),
                       true, "ferro");
}

/// Disjoint non-empty blocks covering all sites of a lattice.
class Partition {
 public:
  Partition(int site_count, std::vector<std::vector<SiteIndex>> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.size() < 2) throw InvalidArgument("a partition needs at least two blocks");
    block_of_.assign(site_count, -1);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      auto& block = blocks_[b];
      if (block.empty()) throw InvalidArgument("partition blocks must be non-empty");
      std::sort(block.begin(), block.end());
      for (SiteIndex s : block) {
        if (s < 0 || s >= site_count) throw InvalidArgument("partition block site outside lattice");
        if (block_of_[s] != -1) throw InvalidArgument("partition blocks must be disjoint");
        block_of_[s] = static_cast<int>(b);
      }
    }
    if (std::find(block_of_.begin(), block_of_.end(), -1) != block_of_.end())
      throw InvalidArgument("partition blocks must cover every site");
  }

  const std::vector<std::vector<SiteIndex>>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int site_count() const { return static_cast<int>(block_of_.size()); }
  int block_of(SiteIndex s) const { return block_of_.at(s); }

  /// Block index containing the whole support, or -1 for a cross term.
  int block_containing(const std::vector<SiteIndex>& support) const {
    const int b = block_of_.at(support.front());
    for (SiteIndex s : support)
      if (block_of_.at(s) != b) return -1;
    return b;
  }

 private:
  std::vector<std::vector<SiteIndex>> blocks_;
  std::vector<int> block_of_;
};

inline Partition split_axis(const SiteLattice& lattice, int axis, int cut) {
  if (axis < 0 || axis >= lattice.dimension()) throw InvalidArgument("split axis out of range");
  if (cut < 1 || cut >= lattice.sides()[axis]) throw InvalidArgument("split cut out of range");
  std::vector<std::vector<SiteIndex>> blocks(2);
  for (SiteIndex s = 0; s < lattice.size(); ++s)
    blocks[lattice.coordinates(s)[axis] < cut ? 0 : 1].push_back(s);
  return Partition(lattice.size(), std::move(blocks));
}

/// Indices of the model terms whose support lies inside the block.
inline std::vector<int> block_term_indices(const DisorderModel& model,
                                           const std::vector<SiteIndex>& block) {
  std::vector<bool> mask(model.site_count(), false);
  for (SiteIndex s : block) {
    if (s < 0 || s >= model.site_count()) throw InvalidArgument("block site outside lattice");
    mask[s] = true;
  }
  std::vector<int> idx;
  for (int k = 0; k < model.term_count(); ++k)
    if (model.term(k).contained_in(mask)) idx.push_back(k);
  return idx;
}

/// Indices of the terms not contained in any single block (the set C).
inline std::vector<int> cross_term_indices(const DisorderModel& model, const Partition& partition) {
  if (partition.site_count() != model.site_count())
    throw InvalidArgument("partition does not match the model lattice");
  std::vector<int> idx;
  for (int k = 0; k < model.term_count(); ++k)
    if (partition.block_containing(model.term(k).support) < 0) idx.push_back(k);
  return idx;
}

/// Same lattice and global site numbering, keeping only terms inside the block.
inline DisorderModel restrict(const DisorderModel& model, const std::vector<SiteIndex>& block) {
  if (block.empty()) throw InvalidArgument("cannot restrict to an empty block");
  std::vector<InteractionTerm> kept;
  for (int k : block_term_indices(model, block)) kept.push_back(model.term(k));
  return DisorderModel(model.lattice(), model.spins(), std::move(kept), model.deterministic(),
                       model.family());
}

inline std::vector<InteractionTerm> cross_terms(const DisorderModel& model, const Partition& partition) {
  std::vector<InteractionTerm> out;
  for (int k : cross_term_indices(model, partition)) out.push_back(model.term(k));
  return out;
}

}  // namespace quenchlab
