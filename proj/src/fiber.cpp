#include "gframe/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "gframe/errors.hpp"
#include "gframe/linalg.hpp"

namespace gframe {

CyclicSignal::CyclicSignal(CVector values) : values_(std::move(values)) {
  if (values_.size() == 0) throw ConfigError("cyclic signal must be nonempty");
}

CyclicSignal CyclicSignal::translated(long shift) const {
  const auto n = static_cast<long>(values_.size());
  CVector out(values_.size());
  for (long w = 0; w < n; ++w) out(w) = values_(((w - shift) % n + n) % n);
  return CyclicSignal(std::move(out));
}

CyclicSignal CyclicSignal::delta(std::size_t n, std::size_t at) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(at % n)) = 1.0;
  return CyclicSignal(std::move(v));
}

CVector unitary_dft(const CVector& f) {
  if (f.size() <= 1) return f;  // the FFT backend does not handle length 1
  Eigen::FFT<double> fft;
  CVector out(f.size());
  fft.fwd(out, f);
  return out / std::sqrt(static_cast<double>(f.size()));
}

CVector unitary_idft(const CVector& f_hat) {
  if (f_hat.size() <= 1) return f_hat;
  Eigen::FFT<double> fft;
  CVector out(f_hat.size());
  fft.inv(out, f_hat);  // includes the 1/N factor
  return out * std::sqrt(static_cast<double>(f_hat.size()));
}

namespace {

// Row m of the unitary DFT matrix; k * t is reduced mod N before scaling.
Eigen::RowVectorXcd dft_row(std::size_t n, std::size_t m) {
  Eigen::RowVectorXcd row(static_cast<Eigen::Index>(n));
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t t = 0; t < n; ++t) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>((m * t) % n) / static_cast<double>(n);
    row(static_cast<Eigen::Index>(t)) = std::polar(norm, angle);
  }
  return row;
}

std::vector<double> resolve_weights(const PeriodizationGrid& grid) {
  if (grid.weights.empty()) return std::vector<double>(grid.n, 1.0);
  if (grid.weights.size() != grid.n)
    throw ConfigError("periodization weights must have length N = " + std::to_string(grid.n));
  for (double w : grid.weights)
    if (!std::isfinite(w) || w <= 0.0) throw ConfigError("periodization weights must be finite and positive");
  return grid.weights;
}

}  // namespace

GOperatorFamily periodization_family(const PeriodizationGrid& grid) {
  if (grid.n == 0 || grid.fibers == 0 || grid.n % grid.fibers != 0)
    throw ConfigError("periodization requires M | N with M, N > 0 (N = " + std::to_string(grid.n) +
                      ", M = " + std::to_string(grid.fibers) + ")");
  const std::vector<double> weights = resolve_weights(grid);
  const std::size_t m_count = grid.fibers;
  const std::size_t offsets = grid.offsets_per_fiber();
  const double cell = 1.0 / static_cast<double>(m_count);

  std::vector<std::string> labels;
  for (std::size_t s = 0; s < m_count; ++s) labels.push_back("sigma" + std::to_string(s));
  std::vector<CMatrix> blocks;
  blocks.reserve(grid.n);
  for (std::size_t s = 0; s < m_count; ++s) {
    for (std::size_t j = 0; j < offsets; ++j) {
      const std::size_t freq = s + j * m_count;
      const double density = weights[freq];
      // Weighted transform F(m) = f^(m) / sqrt(density); the block rescales it
      // by sqrt(density / cell) so the cell measure and density cancel.
      const Eigen::RowVectorXcd weighted = dft_row(grid.n, freq) / std::sqrt(density);
      blocks.push_back(CMatrix(std::sqrt(density / cell) * weighted));
    }
  }
  return GOperatorFamily(DiscreteMeasureSpace(std::move(labels), std::vector<double>(m_count, cell)),
                         IndexSet(offsets), grid.n, std::move(blocks));
}

GOperatorFamily scale_measure(const GOperatorFamily& family, double tau) {
  if (!std::isfinite(tau) || tau <= 0.0) throw ConfigError("scale_measure: factor must be positive");
  return family.with_space(family.space().scaled(tau));
}

void ShiftSystem::validate() const {
  if (n == 0) throw ConfigError("shift system: N must be positive");
  if (step == 0 || n % step != 0) throw ConfigError("shift system: step p must divide N");
  if (generators.empty()) throw ConfigError("shift system: at least one generator required");
  if (extra_shifts.empty()) throw ConfigError("shift system: extra_shifts must contain at least one translate");
  for (const auto& g : generators) {
    if (g.size() != n) throw ConfigError("shift system: generator length differs from N");
    if (g.values().norm() == 0.0) throw ConfigError("shift system: generators must be nonzero");
  }
}

namespace {

void require_signal(const ShiftSystem& system, const CyclicSignal& f) {
  if (f.size() != system.n) throw DimensionError("signal length does not match group order N");
}

// sqrt(L) * (h^(s + q L))_{q = 0..p-1}
CVector fiber_of(const CVector& h_hat, std::size_t s, std::size_t lattice, std::size_t step) {
  CVector out(static_cast<Eigen::Index>(step));
  const double scale = std::sqrt(static_cast<double>(lattice));
  for (std::size_t q = 0; q < step; ++q)
    out(static_cast<Eigen::Index>(q)) = scale * h_hat(static_cast<Eigen::Index>(s + q * lattice));
  return out;
}

// Spectra of T(L_k phi_g) for every (generator, extra shift), generator-major.
std::vector<CVector> translate_spectra(const ShiftSystem& system) {
  std::vector<CVector> out;
  for (const auto& g : system.generators)
    for (long k : system.extra_shifts) out.push_back(unitary_dft(g.translated(k).values()));
  return out;
}

double generator_energy(const ShiftSystem& system) {
  double e = 0.0;
  for (const auto& g : system.generators) e += g.values().squaredNorm();
  return e * static_cast<double>(system.extra_shifts.size());
}

}  // namespace

ShiftCoefficients shift_analysis_coefficients(const ShiftSystem& system, const CyclicSignal& f) {
  system.validate();
  require_signal(system, f);
  const std::size_t n = system.n;
  const CVector f_hat = unitary_dft(f.values());
  const double root_n = std::sqrt(static_cast<double>(n));

  ShiftCoefficients out;
  for (const auto& g : system.generators) {
    // <f, L_gamma phi>(gamma) = sqrt(N) * idft(f^ . conj(phi^))(gamma)
    const CVector corr = root_n * unitary_idft(f_hat.cwiseProduct(unitary_dft(g.values()).conjugate()));
    std::vector<std::vector<Complex>> per_shift;
    for (long k : system.extra_shifts) {
      std::vector<Complex> row;
      for (std::size_t l = 0; l < system.lattice_size(); ++l) {
        const long gamma = k + static_cast<long>(l * system.step);
        const long idx = ((gamma % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
        row.push_back(corr(idx));
      }
      per_shift.push_back(std::move(row));
    }
    out.push_back(std::move(per_shift));
  }
  return out;
}

double FiberDecomposition::energy() const {
  double e = 0.0;
  for (const auto& v : fibers) e += measure * v.squaredNorm();
  return e;
}

FiberDecomposition fiber_decomposition(const ShiftSystem& system, const CyclicSignal& f) {
  if (system.n == 0 || system.step == 0 || system.n % system.step != 0)
    throw ConfigError("fiber_decomposition: step p must divide N");
  require_signal(system, f);
  const CVector f_hat = unitary_dft(f.values());
  FiberDecomposition out;
  out.measure = 1.0 / static_cast<double>(system.lattice_size());
  // Each fiber reads disjoint frequencies; order of evaluation is irrelevant.
  out.fibers.resize(system.fiber_count());
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < system.fiber_count(); ++s)
    out.fibers[s] = fiber_of(f_hat, s, system.lattice_size(), system.step);
  return out;
}

IdentityCheck verify_fiber_norm_identity(const ShiftSystem& system, const CyclicSignal& f, double tol) {
  const ShiftCoefficients coeffs = shift_analysis_coefficients(system, f);
  double lhs = 0.0;
  for (const auto& per_gen : coeffs)
    for (const auto& row : per_gen)
      for (const Complex& c : row) lhs += std::norm(c);

  const FiberDecomposition tf = fiber_decomposition(system, f);
  const std::vector<CVector> spectra = translate_spectra(system);
  std::vector<double> per_fiber(system.fiber_count(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < system.fiber_count(); ++s) {
    double acc = 0.0;
    for (const auto& spec : spectra)
      acc += std::norm(inner(tf.fibers[s], fiber_of(spec, s, system.lattice_size(), system.step)));
    per_fiber[s] = tf.measure * acc;
  }
  double rhs = 0.0;
  for (double v : per_fiber) rhs += v;

  const double scale = std::max({1.0, lhs, rhs, f.values().squaredNorm() * generator_energy(system)});
  Witness w;
  w.f = f.values();
  return IdentityCheck::equality(IdentityKind::FiberNormIdentity, lhs, rhs, tol * scale, w);
}

FiberFrameAnalysis analyze_fiber_frames(const ShiftSystem& system) {
  system.validate();
  const std::vector<CVector> spectra = translate_spectra(system);
  const std::size_t fibers = system.fiber_count();

  std::vector<Eigen::VectorXd> fiber_eigs(fibers);
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < fibers; ++s) {
    CMatrix op = CMatrix::Zero(static_cast<Eigen::Index>(system.step), static_cast<Eigen::Index>(system.step));
    for (const auto& spec : spectra) {
      const CVector v = fiber_of(spec, s, system.lattice_size(), system.step);
      op += v * v.adjoint();
    }
    fiber_eigs[s] = HermitianSpectrum(op).eigenvalues();
  }

  // Global system {L_gamma phi} as columns; its frame operator is N x N.
  const std::size_t n = system.n;
  CMatrix columns(static_cast<Eigen::Index>(n),
                  static_cast<Eigen::Index>(system.generators.size() * system.extra_shifts.size() * system.lattice_size()));
  Eigen::Index col = 0;
  for (const auto& g : system.generators)
    for (long k : system.extra_shifts)
      for (std::size_t l = 0; l < system.lattice_size(); ++l)
        columns.col(col++) = g.translated(k + static_cast<long>(l * system.step)).values();
  const Eigen::VectorXd global_eigs = HermitianSpectrum(columns * columns.adjoint()).eigenvalues();

  double top = global_eigs(global_eigs.size() - 1);
  for (const auto& e : fiber_eigs) top = std::max(top, e(e.size() - 1));

  FiberFrameAnalysis out;
  out.rank_tol = 1e-10 * std::max(top, 1e-300);
  bool any = false;
  for (std::size_t s = 0; s < fibers; ++s) {
    FiberBounds fb;
    fb.fiber = s;
    for (Eigen::Index k = 0; k < fiber_eigs[s].size(); ++k) {
      const double v = fiber_eigs[s](k);
      if (v <= out.rank_tol) continue;
      fb.lower = fb.rank == 0 ? v : std::min(fb.lower, v);
      fb.upper = std::max(fb.upper, v);
      ++fb.rank;
    }
    if (fb.rank > 0) {
      out.envelope.lower = any ? std::min(out.envelope.lower, fb.lower) : fb.lower;
      out.envelope.upper = std::max(out.envelope.upper, fb.upper);
      any = true;
    }
    out.fibers.push_back(fb);
  }
  bool global_any = false;
  for (Eigen::Index k = 0; k < global_eigs.size(); ++k) {
    const double v = global_eigs(k);
    if (v <= out.rank_tol) continue;
    out.global.lower = global_any ? std::min(out.global.lower, v) : v;
    out.global.upper = std::max(out.global.upper, v);
    global_any = true;
    ++out.global_rank;
  }
  return out;
}

VerificationReport verify_fiber_frame_theorem(const ShiftSystem& system, double tol) {
  const FiberFrameAnalysis a = analyze_fiber_frames(system);
  VerificationReport report;
  report.name = "fiber_frame_theorem";
  const double abs_tol = tol * std::max(1.0, a.envelope.upper);

  std::size_t fiber_rank = 0;
  std::size_t nonzero = 0;
  for (const auto& f : a.fibers) {
    fiber_rank += f.rank;
    if (f.rank > 0) ++nonzero;
  }
  const double lower_slack = a.global.lower - a.envelope.lower;
  const double upper_slack = a.envelope.upper - a.global.upper;
  report.add({"lower_containment", 0.0, lower_slack, abs_tol, lower_slack >= -abs_tol,
              "global A " + std::to_string(a.global.lower) + " >= min fiber A " + std::to_string(a.envelope.lower)});
  report.add({"upper_containment", 0.0, upper_slack, abs_tol, upper_slack >= -abs_tol,
              "global B " + std::to_string(a.global.upper) + " <= max fiber B " + std::to_string(a.envelope.upper)});
  report.add({"rank_consistency", std::abs(static_cast<double>(a.global_rank) - static_cast<double>(fiber_rank)), 0.0,
              0.0, a.global_rank == fiber_rank,
              "dim span E(V) = " + std::to_string(a.global_rank) + ", sum of fiber ranks = " + std::to_string(fiber_rank)});
  report.note = "equality gaps: lower " + std::to_string(lower_slack) + ", upper " + std::to_string(upper_slack) +
                "; nonzero fibers " + std::to_string(nonzero) + "/" + std::to_string(a.fibers.size());
  return report;
}

GOperatorFamily fiber_family(const ShiftSystem& system) {
  system.validate();
  const std::size_t n = system.n;
  const std::size_t lattice = system.lattice_size();
  const std::vector<CVector> spectra = translate_spectra(system);

  std::vector<std::string> point_labels;
  for (std::size_t s = 0; s < system.fiber_count(); ++s) point_labels.push_back("sigma" + std::to_string(s));
  std::vector<std::string> index_labels;
  for (std::size_t g = 0; g < system.generators.size(); ++g)
    for (std::size_t k = 0; k < system.extra_shifts.size(); ++k)
      index_labels.push_back("phi" + std::to_string(g) + "_k" + std::to_string(k));

  std::vector<CMatrix> blocks;
  for (std::size_t s = 0; s < system.fiber_count(); ++s) {
    for (const auto& spec : spectra) {
      const CVector fiber = fiber_of(spec, s, lattice, system.step);
      Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t q = 0; q < system.step; ++q)
        row += std::sqrt(static_cast<double>(lattice)) * std::conj(fiber(static_cast<Eigen::Index>(q))) *
               dft_row(n, s + q * lattice);
      blocks.push_back(CMatrix(row));
    }
  }
  return GOperatorFamily(
      DiscreteMeasureSpace(std::move(point_labels), std::vector<double>(system.fiber_count(), 1.0 / static_cast<double>(lattice))),
      IndexSet(std::move(index_labels)), n, std::move(blocks));
}

}  // namespace gframe
