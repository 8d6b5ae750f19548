#include <gtest/gtest.h>

#include "gframe/errors.hpp"
#include "gframe/fiber.hpp"
#include "gframe/fixtures.hpp"
#include "gframe/frame.hpp"
#include "oracles.hpp"

using namespace gframe;

namespace {

ShiftSystem seeded_system(std::size_t n, std::size_t p, std::size_t generators, std::uint64_t seed,
                          std::vector<long> extra = {0}) {
  auto rng = trial_rng(seed, 0);
  ShiftSystem s;
  s.n = n;
  s.step = p;
  s.extra_shifts = std::move(extra);
  for (std::size_t g = 0; g < generators; ++g) s.generators.emplace_back(random_vector(n, rng));
  return s;
}

ShiftSystem delta_system(std::size_t n) {
  ShiftSystem s;
  s.n = n;
  s.step = 1;
  s.generators = {CyclicSignal::delta(n)};
  return s;
}

// Columns L_{k + l p} phi_g for every generator, extra shift and lattice point.
CMatrix shift_columns(const ShiftSystem& s) {
  std::vector<CVector> cols;
  for (const auto& g : s.generators)
    for (long k : s.extra_shifts)
      for (std::size_t l = 0; l < s.n / s.step; ++l) cols.push_back(oracle::translate(g.values(), k + static_cast<long>(l * s.step)));
  CMatrix m(static_cast<Eigen::Index>(s.n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
  return m;
}

}  // namespace

TEST(Dft, MatchesDefinitionAndIsUnitary) {
  for (std::size_t n : {1u, 2u, 6u, 7u, 12u, 64u}) {
    auto rng = trial_rng(n, 0);
    const CVector f = random_vector(n, rng);
    const CVector fh = unitary_dft(f);
    EXPECT_LE((fh - oracle::dft(f)).norm(), 1e-12 * std::max(1.0, f.norm()));
    EXPECT_NEAR(fh.squaredNorm(), f.squaredNorm(), 1e-12 * f.squaredNorm());
    EXPECT_LE((unitary_idft(fh) - f).norm(), 1e-12 * f.norm());
  }
}

TEST(Periodization, FlatGridIsParseval) {
  const auto fam = periodization_family({8, 4, {}});
  const auto b = frame_bounds(fam);
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  EXPECT_EQ(fam.num_points(), 4u);
  EXPECT_EQ(fam.num_indices(), 2u);
}

TEST(Periodization, DeltaHasUnitEnergy) {
  const auto fam = periodization_family({8, 4, {}});
  EXPECT_NEAR(analysis_energy(fam, CyclicSignal::delta(8).values()), 1.0, 1e-14);
}

TEST(Periodization, RejectsNonDivisor) {
  EXPECT_THROW(periodization_family({8, 3, {}}), ConfigError);
  EXPECT_THROW(periodization_family({8, 4, {1.0, 2.0}}), ConfigError);
}

TEST(Periodization, WeightedDensityStaysParseval) {
  auto rng = trial_rng(5, 0);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::vector<double> w(12);
  for (double& x : w) x = u(rng);
  const auto b = frame_bounds(periodization_family({12, 3, w}));
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
}

TEST(Periodization, EveryDivisorUpTo64) {
  for (std::size_t n = 1; n <= 64; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      if (n % m != 0) continue;
      const auto fam = periodization_family({n, m, {}});
      ASSERT_TRUE(is_parseval(fam, 1e-12)) << "N = " << n << ", M = " << m;
    }
  }
}

TEST(ScaleMeasure, Examples) {
  const auto p = periodization_family({8, 2, {}});
  const auto same = frame_bounds(scale_measure(p, 1.0));
  EXPECT_NEAR(same.lower, 1.0, 1e-12);
  const auto three = frame_bounds(scale_measure(p, 3.0));
  EXPECT_NEAR(three.lower, 3.0, 1e-12);
  EXPECT_NEAR(three.upper, 3.0, 1e-12);

  CMatrix a = CMatrix::Zero(2, 2), c = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  c(1, 1) = 2.0;
  const GOperatorFamily one_four(DiscreteMeasureSpace({1.0}), IndexSet(2), 2, {a, c});
  const auto half = frame_bounds(scale_measure(one_four, 0.5));
  EXPECT_NEAR(half.lower, 0.5, 1e-12);
  EXPECT_NEAR(half.upper, 2.0, 1e-12);
  EXPECT_THROW(scale_measure(p, 0.0), ConfigError);
  EXPECT_THROW(scale_measure(p, -1.0), ConfigError);
}

TEST(ShiftCoefficientsTest, DeltaGeneratorReadsSamples) {
  auto rng = trial_rng(6, 0);
  const CyclicSignal f(random_vector(7, rng));
  const auto c = shift_analysis_coefficients(delta_system(7), f);
  ASSERT_EQ(c.size(), 1u);
  ASSERT_EQ(c[0][0].size(), 7u);
  for (std::size_t l = 0; l < 7; ++l) EXPECT_LE(std::abs(c[0][0][l] - f.values()(static_cast<Eigen::Index>(l))), 1e-13);
}

TEST(ShiftCoefficientsTest, OrthogonalSignalGivesZeros) {
  // phi = delta_0 with p = 2 sees only even samples; f lives on odd ones.
  ShiftSystem s;
  s.n = 6;
  s.step = 2;
  s.generators = {CyclicSignal::delta(6)};
  CVector f = CVector::Zero(6);
  f(1) = 1.0;
  f(3) = Complex(0.0, 2.0);
  f(5) = -1.0;
  const auto coeffs = shift_analysis_coefficients(s, CyclicSignal(f));
  for (const auto& row : coeffs[0])
    for (const Complex& v : row) EXPECT_LE(std::abs(v), 1e-14);
}

TEST(ShiftCoefficientsTest, NaiveOracle) {
  const auto s = seeded_system(6, 2, 2, 7, {0, 1, 4});
  auto rng = trial_rng(7, 1);
  const CyclicSignal f(random_vector(6, rng));
  const auto c = shift_analysis_coefficients(s, f);
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t l = 0; l < 3; ++l) {
        const long gamma = s.extra_shifts[k] + static_cast<long>(2 * l);
        const Complex want = oracle::dot(f.values(), oracle::translate(s.generators[g].values(), gamma));
        EXPECT_LE(std::abs(c[g][k][l] - want), 1e-13);
      }
}

TEST(ShiftCoefficientsTest, LengthMismatchThrows) {
  EXPECT_THROW(shift_analysis_coefficients(delta_system(6), CyclicSignal(CVector::Ones(5))), DimensionError);
}

TEST(FiberDecompositionTest, UnitStepGivesScalarFibers) {
  auto rng = trial_rng(8, 0);
  const CyclicSignal f(random_vector(10, rng));
  const auto d = fiber_decomposition(delta_system(10), f);
  const CVector fh = oracle::dft(f.values());
  ASSERT_EQ(d.fibers.size(), 10u);
  for (std::size_t s = 0; s < 10; ++s) {
    ASSERT_EQ(d.fibers[s].size(), 1);
    EXPECT_NEAR(d.measure * d.fibers[s].squaredNorm(), std::norm(fh(static_cast<Eigen::Index>(s))), 1e-13);
  }
}

TEST(FiberDecompositionTest, FullStepGivesOneFiberHoldingTheDft) {
  ShiftSystem s;
  s.n = 9;
  s.step = 9;
  s.generators = {CyclicSignal::delta(9)};
  auto rng = trial_rng(9, 0);
  const CyclicSignal f(random_vector(9, rng));
  const auto d = fiber_decomposition(s, f);
  ASSERT_EQ(d.fibers.size(), 1u);
  EXPECT_EQ(d.measure, 1.0);
  EXPECT_LE((d.fibers[0] - oracle::dft(f.values())).norm(), 1e-12);
}

TEST(FiberDecompositionTest, EnergyConservation) {
  auto rng = trial_rng(10, 0);
  const CyclicSignal f(random_vector(12, rng));
  const auto d = fiber_decomposition(seeded_system(12, 3, 1, 10), f);
  EXPECT_EQ(d.fibers.size(), 4u);
  EXPECT_NEAR(d.energy(), f.values().squaredNorm(), 1e-12 * f.values().squaredNorm());
}

TEST(FiberNormIdentity, DeltaGeneratorBothSidesAreTheNorm) {
  auto rng = trial_rng(11, 0);
  const CyclicSignal f(random_vector(8, rng));
  const auto c = verify_fiber_norm_identity(delta_system(8), f);
  EXPECT_TRUE(c.passed);
  EXPECT_NEAR(c.lhs.real(), f.values().squaredNorm(), 1e-12);
  EXPECT_NEAR(c.rhs.real(), f.values().squaredNorm(), 1e-12);
}

TEST(FiberNormIdentity, ZeroSignal) {
  const auto c = verify_fiber_norm_identity(seeded_system(6, 2, 2, 12), CyclicSignal(CVector::Zero(6)));
  EXPECT_EQ(c.lhs, Complex(0.0));
  EXPECT_LE(std::abs(c.rhs), 1e-30);
  EXPECT_TRUE(c.passed);
}

TEST(FiberNormIdentity, NaiveDoubleSumOracle) {
  std::uint64_t t = 0;
  for (std::size_t n : {6u, 8u, 12u}) {
    for (std::size_t p = 1; p <= n; ++p) {
      if (n % p != 0) continue;
      ++t;
      const auto s = seeded_system(n, p, 1 + t % 3, 300 + t, t % 2 ? std::vector<long>{0, 1} : std::vector<long>{0});
      auto rng = trial_rng(300 + t, 1);
      const CyclicSignal f(random_vector(n, rng));
      double want = 0.0;
      for (const auto& g : s.generators)
        for (long k : s.extra_shifts)
          for (std::size_t l = 0; l < n / p; ++l)
            want += std::norm(oracle::dot(f.values(), oracle::translate(g.values(), k + static_cast<long>(l * p))));
      const auto c = verify_fiber_norm_identity(s, f);
      EXPECT_LE(std::abs(c.lhs.real() - want), 1e-10 * std::max(1.0, want));
      EXPECT_LE(c.residual(), 1e-10 * std::max(1.0, want));
      EXPECT_TRUE(c.passed);
    }
  }
}

TEST(FiberFamily, EnergyIsTheFiberSide) {
  const auto s = seeded_system(12, 4, 2, 13, {0, 5});
  const auto fam = fiber_family(s);
  EXPECT_TRUE(validate_family(fam).empty());
  auto rng = trial_rng(13, 1);
  const CyclicSignal f(random_vector(12, rng));
  const auto c = verify_fiber_norm_identity(s, f);
  EXPECT_NEAR(analysis_energy(fam, f.values()), c.rhs.real(), 1e-10 * std::max(1.0, c.rhs.real()));
}

TEST(FiberFrames, OrthonormalSystem) {
  const auto a = analyze_fiber_frames(delta_system(6));
  for (const auto& fb : a.fibers) {
    EXPECT_NEAR(fb.lower, 1.0, 1e-12);
    EXPECT_NEAR(fb.upper, 1.0, 1e-12);
  }
  EXPECT_NEAR(a.global.lower, 1.0, 1e-12);
  EXPECT_NEAR(a.global.upper, 1.0, 1e-12);
  EXPECT_EQ(a.global_rank, 6u);
}

TEST(FiberFrames, ZeroFibersAreExcluded) {
  // phi with spectrum supported on frequency 0: every other fiber is empty
  // when p = 1.
  ShiftSystem s;
  s.n = 8;
  s.step = 1;
  s.generators = {CyclicSignal(CVector::Ones(8))};
  const auto a = analyze_fiber_frames(s);
  std::size_t nonzero = 0;
  for (const auto& fb : a.fibers) nonzero += fb.rank > 0;
  EXPECT_EQ(nonzero, 1u);
  EXPECT_GT(a.envelope.lower, 0.0);
  EXPECT_NEAR(a.envelope.lower, a.global.lower, 1e-12 * a.global.upper);
  EXPECT_TRUE(verify_fiber_frame_theorem(s).passed());
}

TEST(FiberFrames, GramOracleTwoGenerators) {
  const auto s = seeded_system(12, 4, 2, 14);
  const auto a = analyze_fiber_frames(s);
  const auto g = oracle::gram_bounds(shift_columns(s));
  EXPECT_NEAR(a.global.lower, g.lower, 1e-10 * g.upper);
  EXPECT_NEAR(a.global.upper, g.upper, 1e-10 * g.upper);
  EXPECT_EQ(a.global_rank, g.rank);
  EXPECT_LE(a.envelope.lower, g.lower + 1e-10 * g.upper);
  EXPECT_GE(a.envelope.upper, g.upper - 1e-10 * g.upper);
  EXPECT_TRUE(verify_fiber_frame_theorem(s).passed());
}

// Properties

TEST(FiberProperty, ContainmentAndSharpnessAcrossSeeds) {
  for (std::uint64_t t = 0; t < 60; ++t) {
    const std::size_t n = std::vector<std::size_t>{6, 8, 12, 16}[t % 4];
    std::vector<std::size_t> divisors;
    for (std::size_t p = 1; p <= n; ++p)
      if (n % p == 0) divisors.push_back(p);
    const std::size_t p = divisors[t % divisors.size()];
    const auto s = seeded_system(n, p, 1 + t % 3, 400 + t, t % 3 == 0 ? std::vector<long>{0, 1} : std::vector<long>{0});
    const auto a = analyze_fiber_frames(s);
    const auto g = oracle::gram_bounds(shift_columns(s));
    const double tol = 1e-9 * g.upper;
    EXPECT_LE(a.envelope.lower, g.lower + tol) << "trial " << t;
    EXPECT_GE(a.envelope.upper, g.upper - tol) << "trial " << t;
    EXPECT_NEAR(a.global.lower, g.lower, tol) << "trial " << t;
    EXPECT_TRUE(verify_fiber_frame_theorem(s).passed()) << "trial " << t;
  }
}

TEST(FiberProperty, EnergyConservationAcrossSeeds) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 30;
    std::size_t p = 1 + t % n;
    while (n % p != 0) --p;
    auto rng = trial_rng(500, t);
    const CyclicSignal f(random_vector(n, rng));
    ShiftSystem s;
    s.n = n;
    s.step = p;
    s.generators = {CyclicSignal::delta(n)};
    EXPECT_NEAR(fiber_decomposition(s, f).energy(), f.values().squaredNorm(), 1e-12 * f.values().squaredNorm());
  }
}
