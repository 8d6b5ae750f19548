#pragma once

// Seeded generators for reproducible families, duals, and perturbations.
// Every generator takes an explicit std::mt19937_64 so callers control the
// stream; trial_rng derives independent per-trial streams from one seed.

#include <cstdint>
#include <random>

#include "gframe/model.hpp"

namespace gframe {

std::mt19937_64 trial_rng(std::uint64_t master_seed, std::uint64_t trial);

struct RandomFamilySpec {
  std::size_t dim = 3;
  std::size_t points = 3;
  std::size_t indices = 2;
  std::size_t max_codim = 2;
  double min_weight = 0.25;
  double max_weight = 1.5;
  /// Only real entries when false.
  bool complex_entries = true;
};

/// Gaussian blocks with entries of variance 1/dim and random codomain dims
/// in [1, max_codim]; the total row count is raised to at least dim + 1 so the
/// family is a frame with probability one and has nontrivial alternate duals.
GOperatorFamily random_family(const RandomFamilySpec& spec, std::mt19937_64& rng);

CVector random_vector(std::size_t n, std::mt19937_64& rng, bool complex_entries = true);
CVector random_unit_vector(std::size_t n, std::mt19937_64& rng);
CMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng);
/// Haar-ish unitary via QR of a complex Gaussian matrix.
CMatrix random_unitary(std::size_t n, std::mt19937_64& rng);
SubsetMask random_mask(std::size_t m, std::mt19937_64& rng);

/// Alternate dual G = ~Lambda + N where the stacked weighted N lies in the
/// kernel of the weighted synthesis map, so sum w Lambda^* N = 0. scale sets
/// the size of N relative to a unit Gaussian.
GOperatorFamily nullspace_alternate_dual(const GOperatorFamily& family, std::mt19937_64& rng,
                                         double scale = 1.0);

/// Gamma = Lambda + E with E Gaussian, rescaled so that the difference
/// family has sqrt(lambda_max(D)) = target.
GOperatorFamily scaled_perturbation(const GOperatorFamily& family, double target,
                                    std::mt19937_64& rng);

}  // namespace gframe
