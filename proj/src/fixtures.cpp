#include "gframe/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "gframe/errors.hpp"
#include "gframe/frame.hpp"
#include "gframe/kernels.hpp"
#include "gframe/linalg.hpp"

namespace gframe {

std::mt19937_64 trial_rng(std::uint64_t master_seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

CMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  return m;
}

CVector random_vector(std::size_t n, std::mt19937_64& rng, bool complex_entries) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double re = normal(rng);
    const double im = complex_entries ? normal(rng) : 0.0;
    v(static_cast<Eigen::Index>(k)) = Complex(re, im);
  }
  return v;
}

CVector random_unit_vector(std::size_t n, std::mt19937_64& rng) {
  CVector v = random_vector(n, rng);
  while (v.norm() == 0.0) v = random_vector(n, rng);
  return v / v.norm();
}

CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase of each column so the distribution does not depend on the
  // QR sign convention.
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

SubsetMask random_mask(std::size_t m, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<bool> included(m);
  for (std::size_t i = 0; i < m; ++i) included[i] = coin(rng);
  return SubsetMask(std::move(included));
}

GOperatorFamily random_family(const RandomFamilySpec& spec, std::mt19937_64& rng) {
  if (spec.dim == 0 || spec.points == 0 || spec.indices == 0 || spec.max_codim == 0)
    throw ConfigError("random_family: all sizes must be positive");
  std::uniform_real_distribution<double> weight(spec.min_weight, spec.max_weight);
  std::uniform_int_distribution<std::size_t> codim(1, spec.max_codim);

  std::vector<double> weights(spec.points);
  for (double& w : weights) w = weight(rng);

  const std::size_t count = spec.points * spec.indices;
  std::vector<std::size_t> rows(count);
  std::size_t total = 0;
  for (auto& r : rows) {
    r = codim(rng);
    total += r;
  }
  // Raise codomain dims round-robin until the stacked system is tall.
  for (std::size_t k = 0; total < spec.dim + 1; k = (k + 1) % count) {
    ++rows[k];
    ++total;
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.dim));
  std::vector<CMatrix> blocks;
  blocks.reserve(count);
  for (std::size_t b = 0; b < count; ++b) {
    CMatrix m = random_gaussian(rows[b], spec.dim, rng) * scale;
    if (!spec.complex_entries) m = CMatrix(m.real().cast<Complex>()) * std::sqrt(2.0);
    blocks.push_back(std::move(m));
  }
  return GOperatorFamily(DiscreteMeasureSpace(std::move(weights)), IndexSet(spec.indices), spec.dim, std::move(blocks));
}

GOperatorFamily nullspace_alternate_dual(const GOperatorFamily& family, std::mt19937_64& rng, double scale) {
  const DualFamily canonical = canonical_dual(family);
  const SubsetMask all = SubsetMask::full(family.num_points());
  const CMatrix phi = kernels::stack_weighted(family, all);
  // Projector onto ker(phi^*): I - phi (phi^* phi)^{-1} phi^*.
  const CMatrix s_inv = HermitianSpectrum(phi.adjoint() * phi).inverse();
  const CMatrix r = random_gaussian(static_cast<std::size_t>(phi.rows()), family.dim(), rng) * scale;
  const CMatrix stacked = r - phi * (s_inv * (phi.adjoint() * r));

  std::vector<CMatrix> blocks;
  blocks.reserve(family.num_blocks());
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    const double inv = 1.0 / std::sqrt(family.space().weight(i));
    for (std::size_t j = 0; j < family.num_indices(); ++j) {
      const Eigen::Index d = family.block(i, j).rows();
      blocks.push_back(canonical.family.block(i, j) + inv * stacked.middleRows(row, d));
      row += d;
    }
  }
  return family.with_blocks(std::move(blocks));
}

GOperatorFamily scaled_perturbation(const GOperatorFamily& family, double target, std::mt19937_64& rng) {
  std::vector<CMatrix> noise;
  noise.reserve(family.num_blocks());
  for (const auto& b : family.blocks()) noise.push_back(random_gaussian(b.rows(), b.cols(), rng));
  const GOperatorFamily e = family.with_blocks(noise);
  const double norm = std::sqrt(std::max(HermitianSpectrum(frame_operator(e).matrix()).max(), 0.0));
  const double factor = norm > 0.0 ? target / norm : 0.0;
  std::vector<CMatrix> blocks;
  blocks.reserve(family.num_blocks());
  for (std::size_t b = 0; b < family.num_blocks(); ++b) blocks.push_back(family.blocks()[b] + factor * noise[b]);
  return family.with_blocks(std::move(blocks));
}

}  // namespace gframe
