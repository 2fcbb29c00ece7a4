#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "quenchlab/error.hpp"

namespace quenchlab {

/// m-point Gauss-Hermite rule for the weight exp(-z^2), with the weights
/// normalised to sum to one. For J ~ N(0, Delta^2),
///   Av f(J) ~= sum_i weights[i] * f(Delta * sqrt(2) * nodes[i]),
/// exact for polynomials of degree < 2m.
struct GaussHermiteRule {
  std::vector<double> nodes;    // ascending, symmetric about 0
  std::vector<double> weights;  // positive, sum 1

  int order() const { return static_cast<int>(nodes.size()); }
};

inline constexpr int kMaxHermiteOrder = 128;

namespace detail {

// Orthonormal Hermite recurrence for the normalised weight exp(-z^2)/sqrt(pi):
//   sqrt((k+1)/2) p_{k+1} = z p_k - sqrt(k/2) p_{k-1}.
// Returns p_m(z) and stores p_{m-1}(z); sum_sq receives sum_{k<m} p_k(z)^2.
inline double hermite_orthonormal(int m, double z, double& prev, double& sum_sq) {
  double p_km1 = 0.0;
  double p_k = 1.0;
  sum_sq = 0.0;
  for (int k = 0; k < m; ++k) {
    sum_sq += p_k * p_k;
    const double next = (z * p_k - std::sqrt(0.5 * k) * p_km1) / std::sqrt(0.5 * (k + 1));
    p_km1 = p_k;
    p_k = next;
  }
  prev = p_km1;
  return p_k;
}

inline GaussHermiteRule build_gauss_hermite(int m) {
  // Golub-Welsch: eigenvalues of the symmetric tridiagonal Jacobi matrix.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> z(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  std::sort(z.begin(), z.end());

  GaussHermiteRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  // Newton polish on p_m, then Christoffel weights 1 / sum_k p_k(z)^2.
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = (2 * i + 1 == m) ? 0.0 : z[i];
    double prev = 0.0, sum_sq = 0.0;
    for (int iter = 0; iter < 3 && 2 * i + 1 != m; ++iter) {
      const double p = hermite_orthonormal(m, x, prev, sum_sq);
      x -= p / (std::sqrt(2.0 * m) * prev);
    }
    hermite_orthonormal(m, x, prev, sum_sq);
    rule.nodes[i] = x;
    rule.nodes[m - 1 - i] = -x;
    rule.weights[i] = rule.weights[m - 1 - i] = 1.0 / sum_sq;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached rule of the given order (1..128).
inline const GaussHermiteRule& gauss_hermite(int order) {
  if (order < 1 || order > kMaxHermiteOrder)
    throw InvalidArgument("Gauss-Hermite order must be in [1, 128]");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(detail::build_gauss_hermite(order));
  return *slot;
}

}  // namespace quenchlab
