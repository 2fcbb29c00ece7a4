#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "quenchlab/error.hpp"
#include "quenchlab/gibbs.hpp"
#include "quenchlab/model.hpp"
#include "quenchlab/quench.hpp"

namespace quenchlab {

/// One independent random coupling of the interpolating potential: replica 0
/// covers every term of the full volume, replica s >= 1 the terms inside
/// block s - 1.
struct CouplingSlot {
  int term = 0;     // index into the full model's terms
  int replica = 0;
};

/// U(t) = sqrt(t) U_Lambda(J^(0)) + sqrt(1 - t) sum_s U_{Lambda_s}(J^(s)),
/// with every replica family drawn independently.
class InterpolationSystem {
 public:
  InterpolationSystem(DisorderModel model, Partition partition)
      : model_(std::move(model)), partition_(std::move(partition)), kernel_(model_) {
    require_random(model_);
    if (partition_.site_count() != model_.site_count())
      throw InvalidArgument("partition does not match the model lattice");
    for (int k = 0; k < model_.term_count(); ++k) layout_.push_back({k, 0});
    for (int s = 0; s < partition_.block_count(); ++s) {
      const auto& block = partition_.blocks()[s];
      block_models_.push_back(restrict(model_, block));
      auto idx = block_term_indices(model_, block);
      for (int k : idx) layout_.push_back({k, s + 1});
      block_terms_.push_back(std::move(idx));
    }
    cross_ = cross_term_indices(model_, partition_);
    for (const auto& slot : layout_) variances_.push_back(model_.term(slot.term).variance);
  }

  const DisorderModel& model() const { return model_; }
  const Partition& partition() const { return partition_; }
  const std::vector<DisorderModel>& block_models() const { return block_models_; }
  const std::vector<CouplingSlot>& layout() const { return layout_; }
  const std::vector<int>& cross_terms() const { return cross_; }
  const std::vector<int>& block_terms(int s) const { return block_terms_.at(s); }
  const std::vector<double>& variances() const { return variances_; }
  const GibbsKernel& kernel() const { return kernel_; }

  int coupling_count() const { return static_cast<int>(layout_.size()); }
  int replica_coupling_count(int replica) const {
    int n = 0;
    for (const auto& slot : layout_) n += slot.replica == replica;
    return n;
  }

  /// Per-term couplings of the full model equivalent to U(t) at these replica couplings.
  void effective_couplings(std::span<const double> replica, double t, std::span<double> out) const {
    const double a = std::sqrt(t);
    const double b = std::sqrt(1.0 - t);
    for (int k = 0; k < model_.term_count(); ++k) out[k] = a * replica[k];
    for (std::size_t i = model_.term_count(); i < layout_.size(); ++i)
      out[layout_[i].term] += b * replica[i];
  }

 private:
  DisorderModel model_;
  Partition partition_;
  GibbsKernel kernel_;
  std::vector<DisorderModel> block_models_;
  std::vector<std::vector<int>> block_terms_;
  std::vector<CouplingSlot> layout_;
  std::vector<int> cross_;
  std::vector<double> variances_;
};

inline InterpolationSystem build_interpolation(const DisorderModel& model, const Partition& partition) {
  return InterpolationSystem(model, partition);
}

namespace detail {
inline void require_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("interpolation parameter must lie in [0, 1]");
}
}  // namespace detail

inline double interpolating_potential(const InterpolationSystem& system, std::span<const double> replica,
                                      const SpinConfiguration& sigma, double t) {
  detail::require_unit_interval(t);
  if (static_cast<int>(replica.size()) != system.coupling_count())
    throw IncompleteDisorder("interpolation needs one coupling per replica slot");
  const auto& model = system.model();
  DisorderAssignment full{{replica.begin(), replica.begin() + model.term_count()}};
  double blocks = 0.0;
  std::size_t offset = model.term_count();
  for (std::size_t s = 0; s < system.block_models().size(); ++s) {
    const auto& block = system.block_models()[s];
    DisorderAssignment Js{{replica.begin() + offset, replica.begin() + offset + block.term_count()}};
    blocks += potential_energy(block, Js, sigma);
    offset += block.term_count();
  }
  return std::sqrt(t) * potential_energy(model, full, sigma) + std::sqrt(1.0 - t) * blocks;
}

/// P(t) = Av ln Z(t), averaged over every replica coupling.
inline QuenchedEstimate interpolating_pressure(const InterpolationSystem& system, double t,
                                               const AveragingScheme& scheme) {
  detail::require_unit_interval(t);
  const int terms = system.model().term_count();
  return average_gaussian(system.variances(), 1, scheme,
                          [&](std::span<const double> J, std::span<double> out) {
                            thread_local std::vector<double> K;
                            K.resize(terms);
                            system.effective_couplings(J, t, K);
                            out[0] = system.kernel().log_partition(K);
                          })[0];
}

/// dP/dt = (1/2) sum_{X in C} Delta^2_X Av(omega_t(Phi_X^2) - omega_t(Phi_X)^2).
/// The factor 1/2 comes from d sqrt(t_s)/dt = eps_s / (2 sqrt(t_s)).
inline QuenchedEstimate pressure_derivative_closed_form(const InterpolationSystem& system, double t,
                                                        const AveragingScheme& scheme) {
  detail::require_unit_interval(t);
  const int terms = system.model().term_count();
  const auto& cross = system.cross_terms();
  const auto& model = system.model();
  if (cross.empty()) {
    QuenchedEstimate zero;
    zero.scheme = scheme.describe();
    return zero;
  }
  return average_gaussian(system.variances(), 1, scheme,
                          [&](std::span<const double> J, std::span<double> out) {
                            thread_local std::vector<double> K;
                            thread_local GibbsSummary s;
                            K.resize(terms);
                            system.effective_couplings(J, t, K);
                            system.kernel().summarize(K, s);
                            double d = 0.0;
                            for (int k : cross) d += model.term(k).variance * s.term_variance(k);
                            out[0] = 0.5 * d;
                          })[0];
}

/// Central difference of P(t) from a single paired quadrature pass.
inline double pressure_derivative_fd(const InterpolationSystem& system, double t, double h,
                                     const AveragingScheme& scheme) {
  if (!(h > 0.0) || !(t - h > 0.0) || !(t + h < 1.0))
    throw InvalidArgument("finite-difference stencil must stay inside (0, 1)");
  if (!scheme.is_quadrature()) throw Unsupported("the pressure finite difference needs a quadrature scheme");
  const int terms = system.model().term_count();
  auto est = average_gaussian(system.variances(), 2, scheme,
                              [&](std::span<const double> J, std::span<double> out) {
                                thread_local std::vector<double> K;
                                K.resize(terms);
                                system.effective_couplings(J, t + h, K);
                                out[0] = system.kernel().log_partition(K);
                                system.effective_couplings(J, t - h, K);
                                out[1] = system.kernel().log_partition(K);
                              });
  return (est[0].value - est[1].value) / (2.0 * h);
}

namespace detail {

/// Kernels for each block plus the full-model term indices they read.
struct BlockKernels {
  std::vector<GibbsKernel> kernels;
  std::vector<std::vector<int>> terms;

  BlockKernels(const DisorderModel& model, const Partition& partition) {
    for (const auto& block : partition.blocks()) {
      kernels.emplace_back(restrict(model, block));
      terms.push_back(block_term_indices(model, block));
    }
  }

  template <class Fn>
  double sum(std::span<const double> J, Fn&& per_block) const {
    thread_local std::vector<double> Js;
    double total = 0.0;
    for (std::size_t s = 0; s < kernels.size(); ++s) {
      Js.clear();
      for (int k : terms[s]) Js.push_back(J[k]);
      total += per_block(kernels[s], std::span<const double>(Js));
    }
    return total;
  }
};

inline void require_matching(const DisorderModel& model, const Partition& partition) {
  require_random(model);
  if (partition.site_count() != model.site_count())
    throw InvalidArgument("partition does not match the model lattice");
}

}  // namespace detail

/// P_Lambda - sum_s P_{Lambda_s}, estimated as one paired average.
inline QuenchedEstimate superadditivity_gap_pressure(const DisorderModel& model, const Partition& partition,
                                                     const AveragingScheme& scheme) {
  detail::require_matching(model, partition);
  const GibbsKernel full(model);
  const detail::BlockKernels blocks(model, partition);
  const auto variances = model.variances();
  return average_gaussian(variances, 1, scheme, [&](std::span<const double> J, std::span<double> out) {
    out[0] = full.log_partition(J) -
             blocks.sum(J, [](const GibbsKernel& k, std::span<const double> Js) { return k.log_partition(Js); });
  })[0];
}

/// <U_Lambda> - sum_s <U_{Lambda_s}> (direct) next to
/// sum_{X in C} Delta^2_X Av(omega(Phi_X^2) - omega(Phi_X)^2) (cross form).
struct PotentialGap {
  QuenchedEstimate direct;
  QuenchedEstimate cross_form;
};

inline PotentialGap superadditivity_gap_potential(const DisorderModel& model, const Partition& partition,
                                                  const AveragingScheme& scheme) {
  detail::require_matching(model, partition);
  const GibbsKernel full(model);
  const detail::BlockKernels blocks(model, partition);
  const auto variances = model.variances();
  const auto cross = cross_term_indices(model, partition);
  auto est = average_gaussian(variances, 2, scheme, [&](std::span<const double> J, std::span<double> out) {
    thread_local GibbsSummary s;
    thread_local GibbsSummary sb;
    const double block_energy = blocks.sum(J, [](const GibbsKernel& k, std::span<const double> Js) {
      k.summarize(Js, sb);
      return sb.mean_energy;
    });
    full.summarize(J, s);
    out[0] = s.mean_energy - block_energy;
    double c = 0.0;
    for (int k : cross) c += variances[k] * s.term_variance(k);
    out[1] = c;
  });
  return {est[0], est[1]};
}

/// Av max U_Lambda - sum_s Av max U_{Lambda_s}.
inline QuenchedEstimate superadditivity_gap_ground_state(const DisorderModel& model,
                                                         const Partition& partition,
                                                         const AveragingScheme& scheme) {
  detail::require_matching(model, partition);
  const GibbsKernel full(model);
  const detail::BlockKernels blocks(model, partition);
  const auto variances = model.variances();
  return average_gaussian(variances, 1, scheme, [&](std::span<const double> J, std::span<double> out) {
    out[0] = full.max_energy(J) -
             blocks.sum(J, [](const GibbsKernel& k, std::span<const double> Js) { return k.max_energy(Js); });
  })[0];
}

struct CovarianceDecomposition {
  double lhs = 0.0;    // N c_Lambda(sigma, tau)
  double rhs = 0.0;    // sum_s N_s c_{Lambda_s}(sigma, tau) + cross part
  double cross = 0.0;  // sum_{X in C} Delta^2_X Phi_X(sigma) Phi_X(tau)
};

namespace detail {
/// c_B(sigma, tau) = (1 / |B|) sum_{X in model} Delta^2_X Phi_X(sigma) Phi_X(tau).
inline double covariance(const DisorderModel& model, double volume, const SpinConfiguration& sigma,
                         const SpinConfiguration& tau) {
  double c = 0.0;
  for (const auto& term : model.terms()) c += term.variance * term.phi(sigma) * term.phi(tau);
  return c / volume;
}
}  // namespace detail

/// N c_Lambda = sum_s N_s c_{Lambda_s} + sum_{X in C} Delta^2_X Phi_X(sigma) Phi_X(tau).
inline CovarianceDecomposition cross_covariance_identity(const DisorderModel& model, const Partition& partition,
                                                         const SpinConfiguration& sigma,
                                                         const SpinConfiguration& tau) {
  if (!model.is_legal(sigma) || !model.is_legal(tau)) throw InvalidArgument("illegal spin configuration");
  if (partition.site_count() != model.site_count())
    throw InvalidArgument("partition does not match the model lattice");
  CovarianceDecomposition out;
  const double n = model.site_count();
  out.lhs = n * detail::covariance(model, n, sigma, tau);
  for (const auto& term : cross_terms(model, partition))
    out.cross += term.variance * term.phi(sigma) * term.phi(tau);
  double blocks = 0.0;
  for (const auto& block : partition.blocks()) {
    const double ns = static_cast<double>(block.size());
    blocks += ns * detail::covariance(restrict(model, block), ns, sigma, tau);
  }
  out.rhs = blocks + out.cross;
  return out;
}

/// Nearest-neighbour ferromagnet interpolated between the full volume and
/// the decoupled blocks at inverse temperature beta.
class FerroSystem {
 public:
  FerroSystem(const SiteLattice& lattice, Partition partition, double beta)
      : model_(build_ferromagnet(lattice)), partition_(std::move(partition)), beta_(beta), kernel_(model_) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be finite and >= 0");
    if (partition_.site_count() != lattice.size())
      throw InvalidArgument("partition does not match the lattice");
    cross_ = cross_term_indices(model_, partition_);
  }

  const DisorderModel& model() const { return model_; }
  const Partition& partition() const { return partition_; }
  double beta() const { return beta_; }
  const std::vector<int>& cross_terms() const { return cross_; }

  /// alpha(t) = ln sum_sigma exp(-beta [t H + (1 - t) sum_s H_s]), unnormalised.
  double alpha(double t) const {
    const auto K = couplings(t);
    return kernel_.log_partition(K) + model_.site_count() * std::numbers::ln2;
  }

  /// omega_t(sigma_n sigma_n') for each cross bond.
  std::vector<double> cross_correlations(double t) const {
    GibbsSummary s;
    kernel_.summarize(couplings(t), s);
    std::vector<double> out;
    for (int k : cross_) out.push_back(s.mean_phi[k]);
    return out;
  }

 private:
  std::vector<double> couplings(double t) const {
    std::vector<double> K(model_.term_count(), beta_);
    for (int k : cross_) K[k] = beta_ * t;
    return K;
  }

  DisorderModel model_;
  Partition partition_;
  double beta_;
  GibbsKernel kernel_;
  std::vector<int> cross_;
};

struct FerroDerivative {
  double finite_difference = 0.0;
  double closed = 0.0;                  // beta * sum_C omega_t(sigma sigma')
  std::vector<double> cross_correlations;
};

inline FerroDerivative ferro_interpolation_derivative(const FerroSystem& ferro, double t, double h) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("t must lie in (0, 1)");
  if (!(h > 0.0) || t - h < 0.0 || t + h > 1.0)
    throw InvalidArgument("finite-difference stencil must stay inside [0, 1]");
  FerroDerivative out;
  out.finite_difference = (ferro.alpha(t + h) - ferro.alpha(t - h)) / (2.0 * h);
  out.cross_correlations = ferro.cross_correlations(t);
  for (double c : out.cross_correlations) out.closed += c;
  out.closed *= ferro.beta();
  return out;
}

/// Composite trapezoid rule on an arbitrary ascending grid.
inline double integrate_trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

/// Composite Simpson rule on a uniform grid with an odd number of points.
inline double integrate_simpson(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 3 || x.size() % 2 == 0) throw InvalidArgument("Simpson needs an odd number of points");
  const double h = (x.back() - x.front()) / double(x.size() - 1);
  double s = y.front() + y.back();
  for (std::size_t i = 1; i + 1 < x.size(); ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0;
}

/// {0, 0.1, ..., 1}.
inline std::vector<double> uniform_grid(int points) {
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i) t[i] = double(i) / double(points - 1);
  return t;
}

}  // namespace quenchlab
