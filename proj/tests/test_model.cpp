#include <gtest/gtest.h>

#include "quenchlab/lattice.hpp"
#include "quenchlab/model.hpp"
#include "quenchlab/stability.hpp"

using namespace quenchlab;

TEST(Lattice, CoordinatesRoundTrip) {
  const SiteLattice lat(2, {3, 4});
  ASSERT_EQ(lat.size(), 12);
  for (SiteIndex s = 0; s < lat.size(); ++s) EXPECT_EQ(lat.index(lat.coordinates(s)), s);
  EXPECT_EQ(lat.coordinates(1), (std::vector<int>{1, 0}));
}

TEST(Lattice, RejectsBadShapes) {
  EXPECT_THROW(SiteLattice(0, {}), InvalidArgument);
  EXPECT_THROW(SiteLattice(2, {3}), InvalidArgument);
  EXPECT_THROW(SiteLattice(1, {0}), InvalidArgument);
}

TEST(Lattice, FreeBoundaryNeighbourCount) {
  for (int d : {1, 2})
    for (int L = 1; L <= 6; ++L) {
      const SiteLattice lat(d, std::vector<int>(d, L));
      const auto expected = static_cast<std::size_t>(d * std::pow(L, d - 1) * (L - 1));
      EXPECT_EQ(lat.nearest_neighbor_pairs().size(), expected) << "d=" << d << " L=" << L;
    }
}

TEST(Lattice, EuclideanDistance) {
  const SiteLattice lat(2, {4, 4});
  EXPECT_DOUBLE_EQ(lat.distance(lat.index({0, 0}), lat.index({3, 4 - 1})), std::sqrt(18.0));
}

TEST(Model, EaNearestNeighbourChain) {
  const auto m = build_ea_nearest_neighbor(SiteLattice(1, {4}), 0.5);
  ASSERT_EQ(m.term_count(), 3);
  for (const auto& t : m.terms()) {
    EXPECT_DOUBLE_EQ(t.variance, 0.25);
    EXPECT_EQ(t.support.size(), 2u);
  }
  EXPECT_EQ(m.term(0).support, (std::vector<SiteIndex>{0, 1}));
}

TEST(Model, RejectsNonPositiveScale) {
  EXPECT_THROW(build_ea_nearest_neighbor(SiteLattice(1, {4}), 0.0), InvalidArgument);
  EXPECT_THROW(build_potts(SiteLattice(1, {4}), 3, -1.0), InvalidArgument);
}

TEST(Model, PowerLawRequiresSummableExponent) {
  EXPECT_THROW(build_ea_power_law(SiteLattice(1, {4}), 0.4), StabilityViolation);
  EXPECT_THROW(build_ea_power_law(SiteLattice(1, {4}), 0.5), StabilityViolation);
  const auto m = build_ea_power_law(SiteLattice(1, {4}), 1.0);
  EXPECT_EQ(m.term_count(), 6);
  for (const auto& t : m.terms()) {
    const double r = m.lattice().distance(t.support[0], t.support[1]);
    EXPECT_DOUBLE_EQ(t.variance, std::pow(r, -2.0));
  }
}

TEST(Model, PhiPerBasis) {
  const InteractionTerm ising{{0, 2}, 1.0, BasisKind::SpinProduct};
  EXPECT_EQ(ising.phi({-1, 1, -1}), 1.0);
  EXPECT_EQ(ising.phi({1, 1, -1}), -1.0);
  const InteractionTerm potts{{0, 1}, 1.0, BasisKind::PottsDelta};
  EXPECT_EQ(potts.phi({2, 2}), 1.0);
  EXPECT_EQ(potts.phi({2, 3}), 0.0);
  const InteractionTerm gas{{0, 1, 2}, 1.0, BasisKind::OccupationProduct};
  EXPECT_EQ(gas.phi({1, 1, 1}), 1.0);
  EXPECT_EQ(gas.phi({1, 0, 1}), 0.0);
}

TEST(Model, ValidatesTerms) {
  const SiteLattice lat(1, {3});
  auto make = [&](std::vector<InteractionTerm> terms, SpinSpace s = SpinSpace::ising()) {
    return DisorderModel(lat, s, std::move(terms));
  };
  EXPECT_THROW(make({{{}, 1.0, BasisKind::SpinProduct}}), InvalidArgument);
  EXPECT_THROW(make({{{0, 3}, 1.0, BasisKind::SpinProduct}}), InvalidArgument);
  EXPECT_THROW(make({{{1, 0}, 1.0, BasisKind::SpinProduct}}), InvalidArgument);
  EXPECT_THROW(make({{{0, 1}, -1.0, BasisKind::SpinProduct}}), InvalidArgument);
  EXPECT_THROW(make({{{0, 1}, 1.0, BasisKind::PottsDelta}}), InvalidArgument);
  EXPECT_THROW(make({{{0, 1}, 1.0, BasisKind::SpinProduct}, {{0, 1}, 2.0, BasisKind::SpinProduct}}),
               InvalidArgument);
  EXPECT_NO_THROW(make({{{0, 1, 2}, 1.0, BasisKind::SpinProduct}}));
}

TEST(Model, SpinSpaces) {
  EXPECT_EQ(SpinSpace::potts(3).cardinality(), 3);
  EXPECT_THROW(SpinSpace::potts(1), InvalidArgument);
  EXPECT_TRUE(SpinSpace::lattice_gas().is_legal(0));
  EXPECT_FALSE(SpinSpace::ising().is_legal(0));
  EXPECT_EQ(SpinSpace::potts(4).value(3), 4);
}

TEST(Partition, AxisSplitAndCrossTerms) {
  const auto m = build_ea_nearest_neighbor(SiteLattice(2, {2, 2}), 1.0);
  const auto p = split_axis(m.lattice(), 0, 1);
  EXPECT_EQ(p.block_count(), 2);
  EXPECT_EQ(p.blocks()[0], (std::vector<SiteIndex>{0, 2}));
  const auto cross = cross_term_indices(m, p);
  EXPECT_EQ(cross.size(), 2u);
  for (int k : cross) EXPECT_EQ(p.block_containing(m.term(k).support), -1);
  const auto r = restrict(m, p.blocks()[0]);
  EXPECT_EQ(r.term_count(), 1);
  EXPECT_EQ(r.site_count(), 4);
}

TEST(Partition, RejectsInvalidBlocks) {
  EXPECT_THROW(Partition(4, {{0, 1, 2, 3}}), InvalidArgument);
  EXPECT_THROW(Partition(4, {{0, 1}, {1, 2, 3}}), InvalidArgument);
  EXPECT_THROW(Partition(4, {{0, 1}, {2}}), InvalidArgument);
  EXPECT_THROW(split_axis(SiteLattice(1, {4}), 0, 4), InvalidArgument);
}

TEST(Summability, NearestNeighbourVarianceSum) {
  const double c = 0.7;
  for (int d : {1, 2})
    for (int L = 2; L <= 6; ++L) {
      const SiteLattice lat(d, std::vector<int>(d, L));
      const auto m = build_ea_nearest_neighbor(lat, c);
      const double expected = d * std::pow(L, d - 1) * (L - 1) * c * c;
      EXPECT_NEAR(variance_sum(m), expected, 1e-12);
      EXPECT_LE(variance_sum(m), 2.0 * d * lat.size() * c * c);
    }
}

TEST(Summability, PowerLawPerSiteBounded) {
  for (double alpha : {0.75, 1.0}) {
    // Per-site sum of |r|^{-2 alpha} over the infinite chain: 2 zeta(2 alpha) / 2.
    const double zeta = std::riemann_zeta(2.0 * alpha);
    for (int L = 2; L <= 10; ++L) {
      const auto m = build_ea_power_law(SiteLattice(1, {L}), alpha);
      EXPECT_LE(variance_sum(m) / L, zeta) << "alpha=" << alpha << " L=" << L;
    }
  }
}
