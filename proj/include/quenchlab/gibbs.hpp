#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quenchlab/error.hpp"
#include "quenchlab/model.hpp"

namespace quenchlab {

/// One realisation of the couplings, indexed like DisorderModel::terms().
struct DisorderAssignment {
  std::vector<double> couplings;
};

struct Observable {
  std::function<double(const SpinConfiguration&)> evaluator;
  std::string label;

  double operator()(const SpinConfiguration& sigma) const { return evaluator(sigma); }
};

inline Observable constant_observable(double value) {
  return {[value](const SpinConfiguration&) { return value; }, "const"};
}

inline Observable term_observable(const DisorderModel& model, int k) {
  const InteractionTerm term = model.term(k);
  return {[term](const SpinConfiguration& s) { return term.phi(s); }, "phi[" + std::to_string(k) + "]"};
}

inline Observable site_product_observable(SiteIndex i, SiteIndex j) {
  return {[i, j](const SpinConfiguration& s) { return double(s[i]) * s[j]; },
          "s" + std::to_string(i) + "s" + std::to_string(j)};
}

/// Exhaustive enumeration is refused beyond this many configurations.
inline constexpr std::uint64_t kMaxEnumeratedStates = std::uint64_t{1} << 26;

inline std::uint64_t configuration_count(const DisorderModel& model) {
  std::uint64_t states = 1;
  for (int i = 0; i < model.site_count(); ++i) {
    states *= static_cast<std::uint64_t>(model.spins().cardinality());
    if (states > kMaxEnumeratedStates)
      throw InvalidArgument("configuration space exceeds the enumeration cap of 2^26 states");
  }
  return states;
}

inline void validate_disorder(const DisorderModel& model, const DisorderAssignment& J) {
  if (static_cast<int>(J.couplings.size()) != model.term_count())
    throw IncompleteDisorder("disorder assignment has " + std::to_string(J.couplings.size()) +
                             " couplings, model has " + std::to_string(model.term_count()) +
                             " terms");
  for (double j : J.couplings)
    if (!std::isfinite(j)) throw InvalidArgument("couplings must be finite");
  if (model.deterministic())
    for (double j : J.couplings)
      if (j != 1.0) throw ContractError("deterministic models admit only the all-ones assignment");
}

inline DisorderAssignment zero_disorder(const DisorderModel& model) {
  return {std::vector<double>(model.term_count(), 0.0)};
}

inline DisorderAssignment unit_disorder(const DisorderModel& model) {
  return {std::vector<double>(model.term_count(), 1.0)};
}

inline double potential_energy(const DisorderModel& model, const DisorderAssignment& J,
                               const SpinConfiguration& sigma) {
  validate_disorder(model, J);
  if (!model.is_legal(sigma)) throw InvalidArgument("illegal spin configuration");
  double u = 0.0;
  for (int k = 0; k < model.term_count(); ++k) u += J.couplings[k] * model.term(k).phi(sigma);
  return u;
}

/// Mixed-radix walk over the configurations of a subset of sites; the first
/// listed site varies fastest. Sites outside the subset stay at the first
/// spin value.
class ConfigurationOdometer {
 public:
  ConfigurationOdometer(const DisorderModel& model, std::vector<SiteIndex> sites)
      : spins_(model.spins()),
        sites_(std::move(sites)),
        digits_(sites_.size(), 0),
        sigma_(model.site_count(), model.spins().value(0)) {}

  const SpinConfiguration& configuration() const { return sigma_; }

  /// Advances; returns false after the last configuration.
  bool next() {
    const int radix = spins_.cardinality();
    for (std::size_t k = 0; k < sites_.size(); ++k) {
      if (++digits_[k] < radix) {
        sigma_[sites_[k]] = spins_.value(digits_[k]);
        return true;
      }
      digits_[k] = 0;
      sigma_[sites_[k]] = spins_.value(0);
    }
    return false;
  }

 private:
  SpinSpace spins_;
  std::vector<SiteIndex> sites_;
  std::vector<int> digits_;
  SpinConfiguration sigma_;
};

/// Gibbs quantities at one coupling vector.
struct GibbsSummary {
  double log_z = 0.0;       // ln of the measure-normalised partition function
  double max_energy = 0.0;  // max over configurations of U
  double mean_energy = 0.0; // omega(U)
  std::vector<double> mean_phi;     // omega(Phi_k)
  std::vector<double> mean_phi_sq;  // omega(Phi_k^2)

  double term_variance(int k) const { return mean_phi_sq[k] - mean_phi[k] * mean_phi[k]; }
};

/// Enumeration of a model's term values. Only sites touched by some term
/// are enumerated: the others factor out of the normalised partition
/// function and of every term expectation. Phi values are -1, 0 or 1 and are
/// tabulated as bytes unless the table would exceed kMaxTableBytes, in which
/// case rows are regenerated on every sweep.
class GibbsKernel {
 public:
  static constexpr std::size_t kMaxTableBytes = std::size_t{1} << 27;

  explicit GibbsKernel(const DisorderModel& model) : model_(model), terms_(model.term_count()) {
    configuration_count(model);
    std::vector<bool> active(model.site_count(), false);
    for (const auto& t : model.terms())
      for (SiteIndex s : t.support) active[s] = true;
    for (SiteIndex s = 0; s < model.site_count(); ++s)
      if (active[s]) active_sites_.push_back(s);
    for (std::size_t i = 0; i < active_sites_.size(); ++i) states_ *= model.spins().cardinality();
    log_measure_ = static_cast<double>(active_sites_.size()) * std::log(model.spins().cardinality());

    if (states_ * terms_ <= kMaxTableBytes) {
      table_.resize(states_ * terms_);
      std::size_t s = 0;
      generate_rows([&](const signed char* row) {
        std::copy(row, row + terms_, table_.begin() + s * terms_);
        ++s;
      });
      tabulated_ = true;
    }
  }

  std::size_t state_count() const { return states_; }
  int term_count() const { return terms_; }

  /// ln Z only, by single-pass max-shifted accumulation.
  double log_partition(std::span<const double> couplings) const {
    double shift = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for_each_row([&](const signed char* row) {
      const double e = energy(row, couplings);
      if (e > shift) {
        sum = sum * std::exp(shift - e) + 1.0;
        shift = e;
      } else {
        sum += std::exp(e - shift);
      }
    });
    return shift + std::log(sum) - log_measure_;
  }

  double max_energy(std::span<const double> couplings) const {
    double best = -std::numeric_limits<double>::infinity();
    for_each_row([&](const signed char* row) { best = std::max(best, energy(row, couplings)); });
    return best;
  }

  /// Full summary; `out` is reused across calls to avoid allocation.
  void summarize(std::span<const double> couplings, GibbsSummary& out) const {
    out.mean_phi.assign(terms_, 0.0);
    out.mean_phi_sq.assign(terms_, 0.0);
    double shift = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    double best = shift;
    for_each_row([&](const signed char* row) {
      const double e = energy(row, couplings);
      best = std::max(best, e);
      double w = 1.0;
      if (e > shift) {
        const double scale = std::exp(shift - e);
        sum *= scale;
        for (int k = 0; k < terms_; ++k) {
          out.mean_phi[k] *= scale;
          out.mean_phi_sq[k] *= scale;
        }
        shift = e;
      } else {
        w = std::exp(e - shift);
      }
      sum += w;
      for (int k = 0; k < terms_; ++k) {
        out.mean_phi[k] += w * row[k];
        out.mean_phi_sq[k] += w * (row[k] * row[k]);
      }
    });
    out.log_z = shift + std::log(sum) - log_measure_;
    out.max_energy = best;
    out.mean_energy = 0.0;
    for (int k = 0; k < terms_; ++k) {
      out.mean_phi[k] /= sum;
      out.mean_phi_sq[k] /= sum;
      out.mean_energy += couplings[k] * out.mean_phi[k];
    }
  }

 private:
  double energy(const signed char* row, std::span<const double> couplings) const {
    double u = 0.0;
    for (int k = 0; k < terms_; ++k) u += couplings[k] * row[k];
    return u;
  }

  template <class Visit>
  void generate_rows(Visit&& visit) const {
    std::vector<signed char> row(terms_);
    ConfigurationOdometer walk(model_, active_sites_);
    do {
      for (int k = 0; k < terms_; ++k)
        row[k] = static_cast<signed char>(model_.term(k).phi(walk.configuration()));
      visit(row.data());
    } while (walk.next());
  }

  template <class Visit>
  void for_each_row(Visit&& visit) const {
    if (!tabulated_) {
      generate_rows(visit);
      return;
    }
    const signed char* row = table_.data();
    for (std::size_t s = 0; s < states_; ++s, row += terms_) visit(row);
  }

  DisorderModel model_;
  int terms_ = 0;
  std::vector<SiteIndex> active_sites_;
  std::size_t states_ = 1;
  double log_measure_ = 0.0;
  bool tabulated_ = false;
  std::vector<signed char> table_;  // states_ x terms_, row-major
};

namespace detail {
inline std::vector<double> scaled(const DisorderAssignment& J, double beta) {
  std::vector<double> k(J.couplings);
  for (double& x : k) x *= beta;
  return k;
}
}  // namespace detail

/// ln Z with Z = |S|^-N sum_sigma exp(beta U(J, sigma)).
inline double log_partition_function(const DisorderModel& model, const DisorderAssignment& J,
                                     double beta = 1.0) {
  validate_disorder(model, J);
  return GibbsKernel(model).log_partition(detail::scaled(J, beta));
}

inline double partition_function(const DisorderModel& model, const DisorderAssignment& J,
                                 double beta = 1.0) {
  const double z = std::exp(log_partition_function(model, J, beta));
  if (!std::isfinite(z) || z == 0.0)
    throw std::overflow_error("partition function not representable; use log_partition_function");
  return z;
}

/// omega(obs) by enumeration over every site of the lattice.
inline double gibbs_expectation(const DisorderModel& model, const DisorderAssignment& J,
                                const Observable& obs, double beta = 1.0) {
  validate_disorder(model, J);
  configuration_count(model);
  std::vector<SiteIndex> all(model.site_count());
  for (SiteIndex s = 0; s < model.site_count(); ++s) all[s] = s;
  ConfigurationOdometer walk(model, all);
  double shift = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double acc = 0.0;
  do {
    const auto& sigma = walk.configuration();
    double e = 0.0;
    for (int k = 0; k < model.term_count(); ++k) e += beta * J.couplings[k] * model.term(k).phi(sigma);
    const double value = obs(sigma);
    if (e > shift) {
      const double scale = std::exp(shift - e);
      sum = sum * scale + 1.0;
      acc = acc * scale + value;
      shift = e;
    } else {
      const double w = std::exp(e - shift);
      sum += w;
      acc += w * value;
    }
  } while (walk.next());
  return acc / sum;
}

/// omega(Phi_k^2) - omega(Phi_k)^2.
inline double gibbs_term_variance(const DisorderModel& model, const DisorderAssignment& J, int k,
                                  double beta = 1.0) {
  validate_disorder(model, J);
  if (k < 0 || k >= model.term_count()) throw InvalidArgument("term index out of range");
  GibbsSummary summary;
  GibbsKernel(model).summarize(detail::scaled(J, beta), summary);
  return summary.term_variance(k);
}

struct DerivativeCheck {
  double finite_difference = 0.0;
  double analytic = 0.0;

  double gap() const { return std::abs(finite_difference - analytic); }
};

/// Central difference of omega(Phi_k) in J_k against the Gibbs variance of Phi_k.
inline DerivativeCheck correlation_derivative_check(const DisorderModel& model,
                                                    const DisorderAssignment& J, int k, double h) {
  validate_disorder(model, J);
  if (k < 0 || k >= model.term_count()) throw InvalidArgument("term index out of range");
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be > 0");
  const GibbsKernel kernel(model);
  GibbsSummary summary;
  std::vector<double> couplings = J.couplings;
  couplings[k] = J.couplings[k] + h;
  kernel.summarize(couplings, summary);
  const double up = summary.mean_phi[k];
  couplings[k] = J.couplings[k] - h;
  kernel.summarize(couplings, summary);
  const double down = summary.mean_phi[k];
  kernel.summarize(J.couplings, summary);
  return {(up - down) / (2.0 * h), summary.term_variance(k)};
}

/// max_sigma U(J, sigma).
inline double ground_state_value(const DisorderModel& model, const DisorderAssignment& J) {
  validate_disorder(model, J);
  if (model.term_count() == 0) return 0.0;
  return GibbsKernel(model).max_energy(J.couplings);
}

}  // namespace quenchlab
