#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "quenchlab/error.hpp"
#include "quenchlab/gibbs.hpp"
#include "quenchlab/model.hpp"
#include "quenchlab/quench.hpp"
#include "quenchlab/rng.hpp"

namespace quenchlab {

/// sup over the support's configurations of Phi_X^2.
inline double sup_phi_squared(const InteractionTerm& term, const SpinSpace& spins) {
  const int radix = spins.cardinality();
  std::vector<int> digits(term.support.size(), 0);
  SpinConfiguration sigma(term.support.back() + 1, spins.value(0));
  double best = 0.0;
  for (;;) {
    const double phi = term.phi(sigma);
    best = std::max(best, phi * phi);
    std::size_t k = 0;
    for (; k < digits.size(); ++k) {
      if (++digits[k] < radix) {
        sigma[term.support[k]] = spins.value(digits[k]);
        break;
      }
      digits[k] = 0;
      sigma[term.support[k]] = spins.value(0);
    }
    if (k == digits.size()) return best;
  }
}

/// (1/N) sum_X Delta^2_X sup_sigma Phi_X(sigma)^2 at this volume.
inline double stability_norm_finite_volume(const DisorderModel& model) {
  double s = 0.0;
  for (const auto& term : model.terms()) s += term.variance * sup_phi_squared(term, model.spins());
  return s / model.site_count();
}

/// sum_X Delta^2_X.
inline double variance_sum(const DisorderModel& model) {
  double s = 0.0;
  for (const auto& term : model.terms()) s += term.variance;
  return s;
}

/// ln Av Z = ln |S|^-N sum_sigma exp((1/2) sum_X Delta^2_X Phi_X(sigma)^2),
/// using Av exp(J Phi) = exp(Delta^2 Phi^2 / 2).
inline double annealed_pressure(const DisorderModel& model) {
  configuration_count(model);
  std::vector<SiteIndex> all(model.site_count());
  for (SiteIndex s = 0; s < model.site_count(); ++s) all[s] = s;
  ConfigurationOdometer walk(model, all);
  double shift = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  do {
    double e = 0.0;
    for (const auto& term : model.terms()) {
      const double phi = term.phi(walk.configuration());
      e += 0.5 * term.variance * phi * phi;
    }
    if (e > shift) {
      sum = sum * std::exp(shift - e) + 1.0;
      shift = e;
    } else {
      sum += std::exp(e - shift);
    }
  } while (walk.next());
  return shift + std::log(sum) - model.site_count() * std::log(double(model.spins().cardinality()));
}

/// ln Av Z with the disorder average done by the given scheme.
inline double annealed_pressure_averaged(const DisorderModel& model, const AveragingScheme& scheme) {
  require_random(model);
  const GibbsKernel kernel(model);
  const auto variances = model.variances();
  const auto z = average_gaussian(variances, 1, scheme, [&](std::span<const double> J, std::span<double> out) {
    out[0] = std::exp(kernel.log_partition(J));
  })[0];
  return std::log(z.value);
}

struct StabilityReport {
  double per_site_norm = 0.0;    // ||U|| at this volume
  double nn_reference = 0.0;     // 2 d N c^2 with c^2 the largest variance
  double volume_bound_pressure = 0.0;   // (1/2) ||U|| N
  double volume_bound_potential = 0.0;  // 2 ||U|| N
  double annealed = 0.0;
  QuenchedEstimate quenched_pressure;
  QuenchedEstimate quenched_potential;
  bool jensen = false;     // P <= annealed <= (1/2)||U|| N
  bool potential = false;  // <U> <= 2 ||U|| N
};

/// Checks P <= ln Av Z <= (1/2)||U|| N and <U> <= 2 ||U|| N with slack
/// `tolerance` (plus 3 standard errors for Monte Carlo estimates).
inline StabilityReport check_bounds(const DisorderModel& model, const AveragingScheme& scheme,
                                    double tolerance = 1e-10) {
  require_random(model);
  StabilityReport r;
  const double n = model.site_count();
  r.per_site_norm = stability_norm_finite_volume(model);
  double max_var = 0.0;
  for (const auto& t : model.terms()) max_var = std::max(max_var, t.variance);
  r.nn_reference = 2.0 * model.lattice().dimension() * n * max_var;
  r.volume_bound_pressure = 0.5 * r.per_site_norm * n;
  r.volume_bound_potential = 2.0 * r.per_site_norm * n;
  r.annealed = annealed_pressure(model);

  const GibbsKernel kernel(model);
  const auto variances = model.variances();
  const auto est = average_gaussian(variances, 2, scheme, [&](std::span<const double> J, std::span<double> out) {
    thread_local GibbsSummary s;
    kernel.summarize(J, s);
    out[0] = s.log_z;
    out[1] = s.mean_energy;
  });
  r.quenched_pressure = est[0];
  r.quenched_potential = est[1];
  const double p_slack = tolerance + 3.0 * r.quenched_pressure.std_error;
  const double u_slack = tolerance + 3.0 * r.quenched_potential.std_error;
  r.jensen = r.quenched_pressure.value <= r.annealed + p_slack &&
             r.annealed <= r.volume_bound_pressure + tolerance;
  r.potential = r.quenched_potential.value <= r.volume_bound_potential + u_slack;
  return r;
}

/// Per-site quenched quantities at one volume of a nested sequence.
struct VolumePoint {
  int sites = 0;
  double per_site_norm = 0.0;
  QuenchedEstimate pressure;      // P / N
  QuenchedEstimate potential;     // <U> / N
  QuenchedEstimate ground_state;  // Av max U / N
};

using ModelFamily = std::function<DisorderModel(const SiteLattice&)>;

/// True if every lattice tiles the next one by copies (same dimension,
/// sides dividing, strictly more sites).
inline bool is_nested_chain(const std::vector<SiteLattice>& volumes) {
  for (std::size_t i = 1; i < volumes.size(); ++i) {
    const auto& a = volumes[i - 1];
    const auto& b = volumes[i];
    if (a.dimension() != b.dimension() || b.size() <= a.size()) return false;
    for (int k = 0; k < a.dimension(); ++k)
      if (b.sides()[k] % a.sides()[k] != 0) return false;
  }
  return true;
}

/// Per-site pressure, potential and ground state along a nested volume
/// chain. Monte Carlo volumes use independent streams derived from the
/// master seed.
inline std::vector<VolumePoint> monotone_volume_sequence(const ModelFamily& family,
                                                         const std::vector<SiteLattice>& volumes,
                                                         const AveragingScheme& scheme) {
  if (volumes.empty() || !is_nested_chain(volumes))
    throw InvalidArgument("volumes must form a nested chain, each tiled by copies of the previous");
  std::vector<VolumePoint> out;
  for (std::size_t v = 0; v < volumes.size(); ++v) {
    const DisorderModel model = family(volumes[v]);
    require_random(model);
    AveragingScheme local = scheme;
    if (!scheme.is_quadrature()) {
      const auto& mc = scheme.as_monte_carlo();
      local = AveragingScheme::monte_carlo(mc.samples, derive_seed(mc.seed, v));
    }
    const GibbsKernel kernel(model);
    const auto variances = model.variances();
    auto est = average_gaussian(variances, 3, local, [&](std::span<const double> J, std::span<double> o) {
      thread_local GibbsSummary s;
      kernel.summarize(J, s);
      o[0] = s.log_z;
      o[1] = s.mean_energy;
      o[2] = s.max_energy;
    });
    const double n = model.site_count();
    for (auto& e : est) {
      e.value /= n;
      e.std_error /= n;
    }
    out.push_back({model.site_count(), stability_norm_finite_volume(model), est[0], est[1], est[2]});
  }
  return out;
}

/// a <= b within k combined standard errors plus an absolute tolerance.
inline bool non_decreasing(const QuenchedEstimate& a, const QuenchedEstimate& b, double k_sigma,
                           double tolerance) {
  const double se = std::hypot(a.std_error, b.std_error);
  return b.value >= a.value - k_sigma * se - tolerance;
}

}  // namespace quenchlab
