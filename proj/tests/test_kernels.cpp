#include <gtest/gtest.h>

#include <omp.h>

#include "gframe/fixtures.hpp"
#include "gframe/kernels.hpp"
#include "oracles.hpp"

using namespace gframe;

namespace {

// Restores the OpenMP thread count on scope exit.
struct ThreadScope {
  explicit ThreadScope(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadScope() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST(Kernels, PairwiseDotMatchesNaive) {
  auto rng = trial_rng(1, 0);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 100u}) {
    const CVector a = random_vector(n, rng);
    const CVector b = random_vector(n, rng);
    const Complex got = kernels::pairwise_dot(a.data(), b.data(), n);
    const Complex want = oracle::dot(b, a);  // conj(a) . b
    EXPECT_LE(std::abs(got - want), 1e-13 * std::max(1.0, static_cast<double>(n)));
  }
}

TEST(Kernels, SerialGramMatchesOracle) {
  auto rng = trial_rng(2, 0);
  const CMatrix rows = random_gaussian(23, 6, rng);
  const CMatrix g = kernels::serial::gram(rows);
  CMatrix want(6, 6);
  for (Eigen::Index a = 0; a < 6; ++a)
    for (Eigen::Index b = 0; b < 6; ++b) want(a, b) = oracle::dot(rows.col(b), rows.col(a));
  EXPECT_LE(oracle::max_abs(g - want), 1e-12);
  EXPECT_EQ(g, g.adjoint().eval());
  for (Eigen::Index k = 0; k < 6; ++k) EXPECT_EQ(g(k, k).imag(), 0.0);
}

TEST(Kernels, SerialAndParallelAreBitwiseIdentical) {
  for (int threads : {1, 2, 3, 8}) {
    ThreadScope scope(threads);
    for (std::uint64_t t = 0; t < 10; ++t) {
      auto rng = trial_rng(3, t);
      const CMatrix left = random_gaussian(5 + 13 * t, 2 + t, rng);
      const CMatrix right = random_gaussian(5 + 13 * t, 2 + t, rng);
      EXPECT_EQ(kernels::serial::gram(left), kernels::parallel::gram(left));
      EXPECT_EQ(kernels::serial::cross_gram(left, right), kernels::parallel::cross_gram(left, right));
      EXPECT_EQ(kernels::serial::gram(left), kernels::gram(left));
    }
  }
}

TEST(Kernels, CrossGramMatchesEigenProduct) {
  auto rng = trial_rng(4, 0);
  const CMatrix l = random_gaussian(40, 5, rng);
  const CMatrix r = random_gaussian(40, 4, rng);
  EXPECT_LE(oracle::max_abs(kernels::cross_gram(l, r) - l.adjoint() * r), 1e-12);
}

TEST(Kernels, StackWeightedReproducesFrameOperator) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto rng = trial_rng(5, t);
    const auto fam = random_family({.dim = 4, .points = 4, .indices = 2, .max_codim = 3}, rng);
    const SubsetMask mask = random_mask(4, rng);
    const CMatrix stacked = kernels::stack_weighted(fam, mask);
    EXPECT_EQ(stacked.cols(), 4);
    EXPECT_LE(oracle::max_abs(kernels::gram(stacked) - oracle::frame_operator(fam, mask.included())), 1e-12);
  }
}
