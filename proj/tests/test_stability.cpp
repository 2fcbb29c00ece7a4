#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "quenchlab/stability.hpp"

using namespace quenchlab;

TEST(Stability, NormOfNearestNeighbourModels) {
  const auto m = build_ea_nearest_neighbor(SiteLattice(2, {3, 3}), 0.5);
  EXPECT_NEAR(stability_norm_finite_volume(m), 12 * 0.25 / 9.0, 1e-15);
  const auto potts = build_potts(SiteLattice(1, {3}), 3, 1.0);
  EXPECT_NEAR(stability_norm_finite_volume(potts), 2.0 / 3.0, 1e-15);
  const InteractionTerm t{{0, 1}, 1.0, BasisKind::OccupationProduct};
  EXPECT_EQ(sup_phi_squared(t, SpinSpace::lattice_gas()), 1.0);
}

TEST(Stability, AnnealedClosedForms) {
  const auto bond = build_ea_nearest_neighbor(SiteLattice(1, {2}), 1.0);
  EXPECT_NEAR(annealed_pressure(bond), 0.5, 1e-15);
  const auto potts = build_potts(SiteLattice(1, {2}), 3, 1.0);
  EXPECT_NEAR(annealed_pressure(potts), oracle::kPotts3BondAnnealed, 1e-15);
  EXPECT_NEAR(annealed_pressure_averaged(potts, AveragingScheme::quadrature(40)), oracle::kPotts3BondAnnealed,
              1e-12);
}

TEST(Stability, BoundsHoldOnCorpus) {
  for (const auto& c : fixtures::generate_corpus(12, 505, 2e6)) {
    const auto r = check_bounds(c.model, AveragingScheme::quadrature(16));
    EXPECT_TRUE(r.jensen) << c.label;
    EXPECT_TRUE(r.potential) << c.label;
    EXPECT_LE(r.annealed, r.volume_bound_pressure + 1e-12);
  }
}

TEST(Stability, BoundsUnderMonteCarlo) {
  const auto m = build_ea_nearest_neighbor(SiteLattice(2, {3, 3}), 1.0);
  const auto r = check_bounds(m, AveragingScheme::monte_carlo(2000, 3));
  EXPECT_TRUE(r.jensen);
  EXPECT_TRUE(r.potential);
  EXPECT_GT(r.quenched_pressure.std_error, 0.0);
  EXPECT_DOUBLE_EQ(r.nn_reference, 2 * 2 * 9 * 1.0);
}

TEST(Stability, NestedChains) {
  EXPECT_TRUE(is_nested_chain({SiteLattice(1, {2}), SiteLattice(1, {4}), SiteLattice(1, {8})}));
  EXPECT_TRUE(is_nested_chain({SiteLattice(1, {2}), SiteLattice(1, {6})}));
  EXPECT_FALSE(is_nested_chain({SiteLattice(1, {4}), SiteLattice(1, {6})}));
  EXPECT_FALSE(is_nested_chain({SiteLattice(1, {4}), SiteLattice(1, {4})}));
  EXPECT_FALSE(is_nested_chain({SiteLattice(1, {2}), SiteLattice(2, {2, 2})}));
}

TEST(Stability, MonotoneVolumeSequence) {
  const ModelFamily family = [](const SiteLattice& lat) { return build_ea_nearest_neighbor(lat, 1.0); };
  const auto points = monotone_volume_sequence(
      family, {SiteLattice(1, {2}), SiteLattice(1, {4}), SiteLattice(1, {8})}, AveragingScheme::monte_carlo(4000, 8));
  ASSERT_EQ(points.size(), 3u);
  for (std::size_t i = 1; i < points.size(); ++i) {
    EXPECT_TRUE(non_decreasing(points[i - 1].pressure, points[i].pressure, 3.0, 0.0));
    EXPECT_TRUE(non_decreasing(points[i - 1].potential, points[i].potential, 3.0, 0.0));
    EXPECT_TRUE(non_decreasing(points[i - 1].ground_state, points[i].ground_state, 3.0, 0.0));
    EXPECT_LE(points[i].pressure.value, 0.5 * points[i].per_site_norm + 3.0 * points[i].pressure.std_error);
  }
  EXPECT_THROW(monotone_volume_sequence(family, {SiteLattice(1, {3}), SiteLattice(1, {4})},
                                        AveragingScheme::monte_carlo(10, 1)),
               InvalidArgument);
}

TEST(Stability, PowerLawNormUniformInVolume) {
  for (double alpha : {0.75, 1.0}) {
    double previous = 0.0;
    for (int L = 2; L <= 10; ++L) {
      const double norm = stability_norm_finite_volume(build_ea_power_law(SiteLattice(1, {L}), alpha));
      EXPECT_GE(norm, previous);
      EXPECT_LE(norm, std::riemann_zeta(2.0 * alpha));
      previous = norm;
    }
  }
}
