#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "starspec/spectrum.hpp"
#include "starspec/vertex_unitary.hpp"
#include "support/eigen_oracle.hpp"
#include "support/oracles.hpp"

using namespace starspec;

namespace {

std::vector<double> expanded(const std::vector<EigenphaseRecord>& rs) {
  std::vector<double> out;
  for (const auto& r : rs)
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.theta);
  return out;
}

double cyclic_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace

TEST(VertexUnitary, IsUnitaryForRandomGraphs) {
  oracle::ConfigSource src(41);
  for (int i = 0; i < 50; ++i) {
    const auto g = src.graph(src.edges(2, 7), i % 2 == 0);
    EXPECT_LT(build_vertex_unitary(g).unitarity_defect, 1e-12);
  }
}

TEST(VertexUnitary, FreeCaseIsAPermutation) {
  const auto v = build_vertex_unitary(StarGraph::symmetric(4, {0, 0, 0, 0}));
  for (std::size_t i = 0; i < 8; ++i) {
    int ones = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      const double a = std::abs(v.u(i, j));
      EXPECT_TRUE(a < 1e-15 || std::abs(a - 1.0) < 1e-15);
      ones += a > 0.5;
    }
    EXPECT_EQ(ones, 1);
  }
}

TEST(Eigenphases, MatchEigenSolver) {
  oracle::ConfigSource src(42);
  for (int i = 0; i < 25; ++i) {
    const auto g = src.graph(src.edges(2, 6), i % 2 == 1);
    const auto v = build_vertex_unitary(g);
    const auto mine = expanded(eigenphases(v, g.n_edges()));
    const auto ref = oracle::eigenphases(v.u);
    ASSERT_EQ(mine.size(), ref.size());
    // Compare as multisets on the circle.
    std::vector<bool> used(ref.size(), false);
    for (double th : mine) {
      double best = 1e9;
      std::size_t at = 0;
      for (std::size_t k = 0; k < ref.size(); ++k)
        if (!used[k] && cyclic_gap(th, ref[k]) < best) {
          best = cyclic_gap(th, ref[k]);
          at = k;
        }
      used[at] = true;
      EXPECT_LT(best, 1e-6);
    }
  }
}

TEST(Eigenphases, SixEdgeAlternatingConfiguration) {
  const auto g = StarGraph::symmetric(6, {1, -1, 1, 1, -1, 1});
  const auto phases = eigenphases(build_vertex_unitary(g), 6);
  int total = 0;
  for (const auto& p : phases) {
    EXPECT_EQ(p.multiplicity, 2);
    total += p.multiplicity;
  }
  EXPECT_EQ(total, 12);
  EXPECT_EQ(arc_count(g), 4);
}

TEST(ArcCount, FreeCaseIsZero) { EXPECT_EQ(arc_count(StarGraph::symmetric(4, {0, 0, 0, 0})), 0); }

TEST(ArcCount, RefusesNonSymmetricGraphs) {
  const auto g = StarGraph::general({0.5, 2.0}, {1, 1, 1});
  try {
    arc_count(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
  }
}

TEST(ArcSpectrum, MatchesSolverOnSymmetricGraphs) {
  oracle::ConfigSource src(43);
  for (int i = 0; i < 20; ++i) {
    const auto g = src.graph(src.edges(2, 6), true);
    const auto a = find_eigenvalues(g, -2.0, 2.0);
    const auto b = spectrum_via_arc(g, -2.0, 2.0);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      EXPECT_NEAR(a.records[k].lambda_tilde, b.records[k].lambda_tilde, 1e-8);
      EXPECT_EQ(a.records[k].multiplicity, b.records[k].multiplicity);
    }
    EXPECT_EQ(arc_count(g), deficiency_indices(g).count_in_window);
  }
}

TEST(Electrostatic, UnitaryExactlyWhenEtaVanishes) {
  for (double el : {0.0, 0.1, -1.0})
    for (double er : {0.0, -0.1, 1.0}) {
      const auto v = electrostatic_vertex_n2({1.3, -0.4, el, er, 1.0});
      if (el == 0.0 && er == 0.0)
        EXPECT_LT(v.unitarity_defect, 1e-12);
      else
        EXPECT_GT(v.unitarity_defect, 1e-6);
    }
}

TEST(Electrostatic, PureScalarCaseIsTheTwoEdgeVertexMatrix) {
  // With eta = 0 the 4x4 matrix has the same spectrum as U_2 for the
  // corresponding two-edge star.
  const double tl = 1.3, tr = -0.4, w = 1.0;
  const auto a = electrostatic_vertex_n2({tl, tr, 0.0, 0.0, w});
  const auto b = build_vertex_unitary(broken_line_graph(tl, tr, w));
  const auto ea = oracle::eigenphases(a.u), eb = oracle::eigenphases(b.u);
  ASSERT_EQ(ea.size(), eb.size());
  for (std::size_t k = 0; k < ea.size(); ++k) EXPECT_LT(cyclic_gap(ea[k], eb[k]), 1e-10);
}

TEST(Electrostatic, SingularStrengthsAreRejected) {
  EXPECT_THROW(electrostatic_vertex_n2({2.0, 0.0, 0.0, 0.0, 1.0}), Error);
  EXPECT_THROW(electrostatic_vertex_n2({0.0, 0.0, 2.0, 0.0, 1.0}), Error);
  EXPECT_THROW(electrostatic_vertex_n2({0.0, 0.0, 0.0, 0.0, 4.0}), Error);
}
