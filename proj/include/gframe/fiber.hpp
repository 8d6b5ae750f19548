#pragma once

// Finite cyclic-group analog of the periodization and shift-invariant
// constructions: the unitary DFT on Z_N replaces the operator-valued group
// Fourier transform, and the period cell is the finite set of fibers.
//
// Conventions:
//   f^(m) = N^{-1/2} sum_t f(t) exp(-2 pi i m t / N)
//   L_g phi(w) = phi(w - g mod N)
//   A shift system with lattice step p has L = N / p lattice translates and
//   L fibers; fiber s collects the frequencies {s + q L : q = 0..p-1}, is
//   scaled by sqrt(L) and carries measure 1 / L, so that
//   ||f||^2 = sum_s (1/L) ||T f(s)||^2.

#include <cstddef>
#include <vector>

#include "gframe/model.hpp"
#include "gframe/report.hpp"

namespace gframe {

/// Function on Z_N.
class CyclicSignal {
 public:
  CyclicSignal() = default;
  explicit CyclicSignal(CVector values);

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  const CVector& values() const { return values_; }
  CyclicSignal translated(long shift) const;

  static CyclicSignal delta(std::size_t n, std::size_t at = 0);

 private:
  CVector values_;
};

/// Unitary DFT and its inverse.
CVector unitary_dft(const CVector& f);
CVector unitary_idft(const CVector& f_hat);

/// M sample points of the period cell with N / M offsets each; weights is the
/// positive density over frequencies m = s + j M (length N), empty meaning flat.
struct PeriodizationGrid {
  std::size_t n = 0;
  std::size_t fibers = 0;
  std::vector<double> weights;

  std::size_t offsets_per_fiber() const { return n / fibers; }
};

/// Family on C^N with points s = 0..M-1 (measure 1/M) and indices j, blocks
/// Lambda_{s,j} f = c_{s,j} F(s + j M) where F = f^ / sqrt(weight) is the
/// weighted transform and c_{s,j} = sqrt(M weight(s + jM)). The energy sums to
/// ||f||^2, so the family is Parseval. Throws ConfigError unless M | N and all
/// weights are positive and finite.
GOperatorFamily periodization_family(const PeriodizationGrid& grid);

/// Measure weights multiplied by tau > 0 (ConfigError otherwise).
GOperatorFamily scale_measure(const GOperatorFamily& family, double tau);

/// Generators phi, lattice step p (p | N), extra translates Gamma_1.
struct ShiftSystem {
  std::size_t n = 0;
  std::size_t step = 1;
  std::vector<CyclicSignal> generators;
  std::vector<long> extra_shifts{0};

  std::size_t lattice_size() const { return n / step; }
  std::size_t fiber_count() const { return n / step; }
  std::size_t fiber_dim() const { return step; }
  /// ConfigError unless step divides n, generators are nonzero of length n,
  /// and extra_shifts is nonempty.
  void validate() const;
};

/// coefficients[g][k][l] = <f, L_{extra_k + l p} phi_g>.
using ShiftCoefficients = std::vector<std::vector<std::vector<Complex>>>;

ShiftCoefficients shift_analysis_coefficients(const ShiftSystem& system, const CyclicSignal& f);

struct FiberDecomposition {
  std::vector<CVector> fibers;
  double measure = 0.0;  // weight of every fiber, 1 / L

  double energy() const;
};

FiberDecomposition fiber_decomposition(const ShiftSystem& system, const CyclicSignal& f);

/// sum_{g,gamma} |<f, L_gamma phi_g>|^2 =
///   sum_s (1/L) sum_{g,k} |<T f(s), T(L_k phi_g)(s)>|^2.
/// Passes iff the residual is at most tol * max(1, ||f||^2 * system energy).
IdentityCheck verify_fiber_norm_identity(const ShiftSystem& system, const CyclicSignal& f,
                                         double tol = 1e-10);

struct FiberBounds {
  std::size_t fiber = 0;
  std::size_t rank = 0;
  double lower = 0.0;  // smallest nonzero eigenvalue of the fiber frame operator
  double upper = 0.0;
};

struct FiberFrameAnalysis {
  std::vector<FiberBounds> fibers;
  FrameBounds envelope;  // (min A_s, max B_s) over nonzero fibers
  FrameBounds global;    // bounds of {L_gamma phi} on span E(V)
  std::size_t global_rank = 0;
  double rank_tol = 0.0;
};

/// Per-fiber and global bounds restricted to the spanned subspaces.
FiberFrameAnalysis analyze_fiber_frames(const ShiftSystem& system);

/// Asserts envelope.lower <= global.lower and global.upper <= envelope.upper
/// within tol * max(1, envelope.upper); reports the equality gap as a note.
VerificationReport verify_fiber_frame_theorem(const ShiftSystem& system, double tol = 1e-10);

/// The system as a family on C^N: points are fibers s (weight 1/L), indices
/// are (generator, extra shift) pairs, and each block is the row functional
/// f -> <T f(s), T(L_k phi)(s)>. Its analysis energy is the fiber side of
/// the norm identity.
GOperatorFamily fiber_family(const ShiftSystem& system);

}  // namespace gframe
