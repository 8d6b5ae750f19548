#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gframe/frame.hpp"
#include "gframe/report.hpp"

namespace gframe {

/// Constants of the perturbation condition
///   ||(Lambda - Gamma) f||_E <= l1 ||Lambda f||_E + l2 ||Gamma f||_E + mu ||f||
/// where ||T f||_E^2 = integral sum_j ||T_{x,j} f||^2.
struct PerturbationParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu = 0.0;

  /// max(lambda1 + mu / sqrt(A), lambda2) < 1 with A > 0.
  bool gate_holds(double lower_bound) const;
};

enum class ConditionStatus { CertifiedSufficient, SampledOnly, CounterexampleFound };

const char* to_string(ConditionStatus status);

struct AscentOptions {
  int starts = 32;
  int iterations = 500;
  std::uint64_t seed = 0;
  /// Counterexample threshold on the ratio r(f); < 0 selects
  /// 1e-9 * max(1, sqrt(lambda_max(S_Lambda))).
  double tol = -1.0;
};

struct ConditionResult {
  ConditionStatus status = ConditionStatus::SampledOnly;
  /// sqrt(lambda_max(D)) and l1 sqrt(A_Lambda) + l2 sqrt(A_Gamma) + mu.
  double certificate_lhs = 0.0;
  double certificate_rhs = 0.0;
  /// Largest r(f) found by the ascent (unset when certified).
  std::optional<double> max_ratio;
  std::optional<CVector> witness;
};

/// Difference family {Lambda - Gamma}; requires same_shape.
GOperatorFamily difference_family(const GOperatorFamily& lambda, const GOperatorFamily& gamma);

/// r(f) = sqrt<Df,f> - l1 sqrt<S_L f,f> - l2 sqrt<S_G f,f> - mu ||f|| for unit f.
double condition_ratio(const CMatrix& d, const CMatrix& s_lambda, const CMatrix& s_gamma,
                       const PerturbationParams& params, const CVector& f);

struct AscentResult {
  double best = 0.0;
  CVector argmax;
  int best_start = -1;
  std::vector<double> per_start;  // final r(f) of every start
};

/// Multi-start projected gradient ascent of condition_ratio over the unit
/// sphere with backtracking line search. Starts 0..2 are the top eigenvector
/// of D and the bottom eigenvectors of S_Gamma and S_Lambda; the rest are
/// random unit vectors drawn from trial_rng(seed, start). Starts run in
/// parallel; the result is merged by max with lowest-index tie-break, so it
/// does not depend on scheduling.
AscentResult maximize_condition_ratio(const CMatrix& d, const CMatrix& s_lambda, const CMatrix& s_gamma,
                                      const PerturbationParams& params, const AscentOptions& options = {});

/// Three-stage decision: spectral certificate, else multi-start projected
/// ascent of r over the unit sphere, else SampledOnly.
ConditionResult check_condition(const GOperatorFamily& lambda, const GOperatorFamily& gamma,
                                const PerturbationParams& params, const AscentOptions& options = {});

/// Closed-form bounds guaranteed for Gamma:
///   A (1 - (l1 + l2 + mu/sqrt(A)) / (1 + l2))^2,
///   B (1 + (l1 + l2 + mu/sqrt(B)) / (1 - l2))^2.
/// Throws GateError when the gate fails for A.
FrameBounds predicted_bounds(double lower, double upper, const PerturbationParams& params);

struct PerturbationVerdict {
  ConditionResult condition;
  bool gate = false;
  std::optional<FrameBounds> predicted;
  FrameBounds original;
  FrameBounds actual;
};

/// Condition status, predicted and actual bounds without asserting anything.
PerturbationVerdict assess_perturbation(const GOperatorFamily& lambda, const GOperatorFamily& gamma,
                                        const PerturbationParams& params,
                                        const AscentOptions& options = {});

/// Asserts containment of Gamma's bounds in the predicted ones when the
/// condition is certified or sampled. Throws GateError if the gate fails for
/// A = lambda_min(S_Lambda). rel_tol scales with max(1, |bound|).
VerificationReport verify_perturbation_theorem(const GOperatorFamily& lambda,
                                               const GOperatorFamily& gamma,
                                               const PerturbationParams& params,
                                               const AscentOptions& options = {},
                                               double rel_tol = 1e-9);

/// M = lambda_max(D). When M < A checks Gamma's bounds against
/// (A (1 - sqrt(M/A))^2, B (1 + sqrt(M/B))^2); otherwise the report carries
/// a NotApplicable note and passes vacuously.
VerificationReport verify_corollary_m(const GOperatorFamily& lambda, const GOperatorFamily& gamma,
                                      double rel_tol = 1e-9);

struct RemarkProbe {
  GOperatorFamily lambda;
  GOperatorFamily gamma;
  PerturbationParams params;
  CVector witness;      // unit vector annihilated by Gamma
  bool gate = true;     // gate_holds(lambda_min(S_Lambda))
  double gamma_lower = 0.0;
  ConditionResult condition;
};

/// Lambda = U (unitary, Parseval), Gamma = U (I - v v^*) with parameters
/// (1, 0, 0): the condition holds for every f, the gate fails, and Gamma
/// annihilates v. Seed 0 gives U = I, v = e_{n-1}. Requires n >= 2.
RemarkProbe remark_counterexample_probe(std::size_t n, std::uint64_t seed);

}  // namespace gframe
