#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "quenchlab/error.hpp"
#include "quenchlab/gauss_hermite.hpp"
#include "quenchlab/gibbs.hpp"
#include "quenchlab/model.hpp"
#include "quenchlab/parallel.hpp"
#include "quenchlab/rng.hpp"

namespace quenchlab {

struct QuadratureScheme {
  int order = 40;
  std::uint64_t cap = std::uint64_t{1} << 24;  // max tensor points
};

struct MonteCarloScheme {
  std::uint64_t samples = 20000;
  std::uint64_t seed = 0x5eed;
};

/// How the disorder average Av is realised.
class AveragingScheme {
 public:
  static AveragingScheme quadrature(int order, std::uint64_t cap = std::uint64_t{1} << 24) {
    if (order < 1 || order > kMaxHermiteOrder)
      throw InvalidArgument("quadrature order must be in [1, 128]");
    return AveragingScheme(QuadratureScheme{order, cap});
  }

  static AveragingScheme monte_carlo(std::uint64_t samples, std::uint64_t seed) {
    if (samples < 2) throw InvalidArgument("Monte Carlo needs at least 2 samples");
    return AveragingScheme(MonteCarloScheme{samples, seed});
  }

  bool is_quadrature() const { return std::holds_alternative<QuadratureScheme>(kind_); }
  const QuadratureScheme& as_quadrature() const { return std::get<QuadratureScheme>(kind_); }
  const MonteCarloScheme& as_monte_carlo() const { return std::get<MonteCarloScheme>(kind_); }

  /// Number of integrand evaluations for B random couplings.
  std::uint64_t points_for(int couplings) const {
    if (!is_quadrature()) return as_monte_carlo().samples;
    const auto& q = as_quadrature();
    std::uint64_t points = 1;
    for (int b = 0; b < couplings; ++b) {
      points *= static_cast<std::uint64_t>(q.order);
      if (points > q.cap)
        throw SchemeTooLarge("quadrature order " + std::to_string(q.order) + " over " +
                             std::to_string(couplings) + " couplings exceeds the cap of " +
                             std::to_string(q.cap) + " points");
    }
    return points;
  }

  std::string describe() const {
    if (is_quadrature()) return "quadrature(m=" + std::to_string(as_quadrature().order) + ")";
    const auto& mc = as_monte_carlo();
    return "mc(n=" + std::to_string(mc.samples) + ",seed=" + std::to_string(mc.seed) + ")";
  }

 private:
  explicit AveragingScheme(std::variant<QuadratureScheme, MonteCarloScheme> kind) : kind_(kind) {}
  std::variant<QuadratureScheme, MonteCarloScheme> kind_;
};

/// m = 40 quadrature while 40^B <= 2^22 points, otherwise 20000 MC samples.
inline AveragingScheme default_scheme(int couplings, std::uint64_t seed = 0x5eed) {
  double points = 1.0;
  for (int b = 0; b < couplings; ++b) points *= 40.0;
  if (points <= double(std::uint64_t{1} << 22)) return AveragingScheme::quadrature(40);
  return AveragingScheme::monte_carlo(20000, seed);
}

struct QuenchedEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for quadrature
  std::string scheme;
  std::uint64_t count = 0;
};

/// Draw J_b = sqrt(variance_b) * g_b for sample `index`; g_b comes from the
/// counter stream keyed on (seed, index, b).
inline void gaussian_sample(std::span<const double> variances, std::uint64_t seed, std::uint64_t index,
                            std::span<double> out) {
  const CounterRng rng(seed, index);
  for (std::size_t b = 0; b < variances.size(); ++b)
    out[b] = std::sqrt(variances[b]) * rng.normal(b);
}

/// Average of a vector-valued functional of independent centred Gaussians.
/// `fn(J, out)` must be pure and thread-safe. Work is cut into fixed chunks
/// and partial results are reduced in chunk order, so the output is
/// bit-identical for any worker count.
template <class Fn>
std::vector<QuenchedEstimate> average_gaussian(std::span<const double> variances, std::size_t outputs,
                                               const AveragingScheme& scheme, Fn&& fn) {
  const int dims = static_cast<int>(variances.size());
  const std::uint64_t points = scheme.points_for(dims);
  std::vector<QuenchedEstimate> result(outputs);
  for (auto& r : result) {
    r.scheme = scheme.describe();
    r.count = points;
  }

  if (scheme.is_quadrature()) {
    const GaussHermiteRule& rule = gauss_hermite(scheme.as_quadrature().order);
    const int m = rule.order();
    std::vector<double> scale(dims);
    for (int b = 0; b < dims; ++b) scale[b] = std::sqrt(2.0 * variances[b]);
    constexpr std::uint64_t kChunk = 4096;
    const std::size_t chunks = static_cast<std::size_t>((points + kChunk - 1) / kChunk);
    std::vector<double> partial(chunks * outputs, 0.0);
    parallel_for(chunks, [&](std::size_t c) {
      std::vector<int> digit(dims);
      std::uint64_t start = c * kChunk;
      for (int b = 0; b < dims; ++b) {
        digit[b] = static_cast<int>(start % m);
        start /= m;
      }
      std::vector<double> J(dims), out(outputs);
      double* acc = partial.data() + c * outputs;
      const std::uint64_t end = std::min(points, (c + 1) * kChunk);
      for (std::uint64_t p = c * kChunk; p < end; ++p) {
        double w = 1.0;
        for (int b = 0; b < dims; ++b) {
          J[b] = scale[b] * rule.nodes[digit[b]];
          w *= rule.weights[digit[b]];
        }
        fn(std::span<const double>(J), std::span<double>(out));
        for (std::size_t k = 0; k < outputs; ++k) acc[k] += w * out[k];
        for (int b = 0; b < dims; ++b) {
          if (++digit[b] < m) break;
          digit[b] = 0;
        }
      }
    });
    for (std::size_t c = 0; c < chunks; ++c)
      for (std::size_t k = 0; k < outputs; ++k) result[k].value += partial[c * outputs + k];
    return result;
  }

  const auto& mc = scheme.as_monte_carlo();
  const std::size_t n = static_cast<std::size_t>(mc.samples);
  std::vector<double> values(n * outputs);
  constexpr std::size_t kChunk = 256;
  parallel_for((n + kChunk - 1) / kChunk, [&](std::size_t c) {
    std::vector<double> J(dims);
    for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) {
      gaussian_sample(variances, mc.seed, i, J);
      fn(std::span<const double>(J), std::span<double>(values.data() + i * outputs, outputs));
    }
  });
  for (std::size_t k = 0; k < outputs; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += values[i * outputs + k];
    mean /= double(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = values[i * outputs + k] - mean;
      ss += d * d;
    }
    result[k].value = mean;
    result[k].std_error = std::sqrt(ss / double(n - 1) / double(n));
  }
  return result;
}

inline void require_random(const DisorderModel& model) {
  if (model.deterministic())
    throw ContractError("disorder averages are undefined for a deterministic model");
}

inline DisorderAssignment sample_disorder(const DisorderModel& model, const AveragingScheme& scheme,
                                          std::uint64_t sample_index) {
  require_random(model);
  if (scheme.is_quadrature()) throw InvalidArgument("sample_disorder needs a Monte Carlo scheme");
  DisorderAssignment J{std::vector<double>(model.term_count())};
  const auto variances = model.variances();
  gaussian_sample(variances, scheme.as_monte_carlo().seed, sample_index, J.couplings);
  return J;
}

/// Av of an arbitrary functional of the disorder.
inline QuenchedEstimate quenched_average(const DisorderModel& model,
                                         const std::function<double(const DisorderAssignment&)>& functional,
                                         const AveragingScheme& scheme) {
  require_random(model);
  const auto variances = model.variances();
  return average_gaussian(variances, 1, scheme, [&](std::span<const double> J, std::span<double> out) {
    out[0] = functional(DisorderAssignment{{J.begin(), J.end()}});
  })[0];
}

/// P = Av ln Z.
inline QuenchedEstimate quenched_pressure(const DisorderModel& model, const AveragingScheme& scheme) {
  require_random(model);
  const GibbsKernel kernel(model);
  const auto variances = model.variances();
  return average_gaussian(variances, 1, scheme, [&](std::span<const double> J, std::span<double> out) {
    out[0] = kernel.log_partition(J);
  })[0];
}

/// <U> computed directly as Av omega(U), and in the corollary form
/// sum_X Delta^2_X Av(omega(Phi_X^2) - omega(Phi_X)^2).
struct QuenchedPotential {
  QuenchedEstimate direct;
  QuenchedEstimate corollary;
};

inline QuenchedPotential quenched_potential(const DisorderModel& model, const AveragingScheme& scheme) {
  require_random(model);
  const GibbsKernel kernel(model);
  const auto variances = model.variances();
  const int terms = model.term_count();
  auto est = average_gaussian(variances, 2, scheme, [&](std::span<const double> J, std::span<double> out) {
    thread_local GibbsSummary s;
    kernel.summarize(J, s);
    out[0] = s.mean_energy;
    double fluct = 0.0;
    for (int k = 0; k < terms; ++k) fluct += variances[k] * s.term_variance(k);
    out[1] = fluct;
  });
  return {est[0], est[1]};
}

/// Av max_sigma U(J, sigma).
inline QuenchedEstimate quenched_ground_state(const DisorderModel& model, const AveragingScheme& scheme) {
  require_random(model);
  const GibbsKernel kernel(model);
  const auto variances = model.variances();
  return average_gaussian(variances, 1, scheme, [&](std::span<const double> J, std::span<double> out) {
    out[0] = kernel.max_energy(J);
  })[0];
}

/// <J_X Phi_X> as Av(J_X omega(Phi_X)), and after Gaussian integration by
/// parts as Delta^2_X Av(omega(Phi_X^2) - omega(Phi_X)^2).
struct LocalTermAverage {
  QuenchedEstimate direct;
  QuenchedEstimate by_parts;
};

/// Both forms for every term in a single pass over the disorder.
inline std::vector<LocalTermAverage> local_term_averages(const DisorderModel& model,
                                                         const AveragingScheme& scheme) {
  require_random(model);
  const GibbsKernel kernel(model);
  const auto variances = model.variances();
  const int terms = model.term_count();
  auto est = average_gaussian(variances, 2 * terms, scheme,
                              [&](std::span<const double> J, std::span<double> out) {
                                thread_local GibbsSummary s;
                                kernel.summarize(J, s);
                                for (int k = 0; k < terms; ++k) {
                                  out[2 * k] = J[k] * s.mean_phi[k];
                                  out[2 * k + 1] = variances[k] * s.term_variance(k);
                                }
                              });
  std::vector<LocalTermAverage> result(terms);
  for (int k = 0; k < terms; ++k) result[k] = {est[2 * k], est[2 * k + 1]};
  return result;
}

inline LocalTermAverage local_term_average(const DisorderModel& model, int term_index,
                                           const AveragingScheme& scheme) {
  if (term_index < 0 || term_index >= model.term_count()) throw InvalidArgument("term index out of range");
  return local_term_averages(model, scheme)[term_index];
}

/// Av(J_X f) - Delta^2_X Av(df/dJ_X) with f = omega(Phi_X); quadrature only.
inline double ibp_residual(const DisorderModel& model, int term_index, const AveragingScheme& scheme) {
  if (!scheme.is_quadrature())
    throw Unsupported("the integration-by-parts residual needs a quadrature scheme");
  const auto local = local_term_average(model, term_index, scheme);
  return local.direct.value - local.by_parts.value;
}

}  // namespace quenchlab
