#include "gframe/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gframe/errors.hpp"
#include "gframe/fixtures.hpp"
#include "gframe/linalg.hpp"

namespace gframe {

bool PerturbationParams::gate_holds(double lower_bound) const {
  if (!(lower_bound > 0.0) || lambda1 < 0.0 || lambda2 < 0.0 || mu < 0.0) return false;
  return std::max(lambda1 + mu / std::sqrt(lower_bound), lambda2) < 1.0;
}

const char* to_string(ConditionStatus status) {
  switch (status) {
    case ConditionStatus::CertifiedSufficient: return "CertifiedSufficient";
    case ConditionStatus::SampledOnly: return "SampledOnly";
    case ConditionStatus::CounterexampleFound: return "CounterexampleFound";
  }
  return "Unknown";
}

GOperatorFamily difference_family(const GOperatorFamily& lambda, const GOperatorFamily& gamma) {
  if (!lambda.same_shape(gamma)) throw DimensionError("perturbation: families differ in shape");
  std::vector<CMatrix> blocks;
  blocks.reserve(lambda.num_blocks());
  for (std::size_t b = 0; b < lambda.num_blocks(); ++b) blocks.push_back(lambda.blocks()[b] - gamma.blocks()[b]);
  return lambda.with_blocks(std::move(blocks));
}

namespace {

double form(const CMatrix& a, const CVector& f) { return std::max(0.0, inner(a * f, f).real()); }

struct Operators {
  CMatrix d, s_lambda, s_gamma;
};

Operators operators_of(const GOperatorFamily& lambda, const GOperatorFamily& gamma) {
  return {frame_operator(difference_family(lambda, gamma)).matrix(), frame_operator(lambda).matrix(),
          frame_operator(gamma).matrix()};
}

// Real gradient of f -> sqrt(<A f, f>) in the identification C^n = R^2n.
CVector sqrt_form_gradient(const CMatrix& a, const CVector& f, double floor) {
  const double q = std::max(form(a, f), floor);
  return a * f / std::sqrt(q);
}

struct StartResult {
  double value = -std::numeric_limits<double>::infinity();
  CVector f;
};

StartResult ascend(const CMatrix& d, const CMatrix& sl, const CMatrix& sg, const PerturbationParams& p, CVector f,
                   int iterations, double floor) {
  f.normalize();
  auto ratio = [&](const CVector& x) { return condition_ratio(d, sl, sg, p, x); };
  double value = ratio(f);
  double step = 1.0;
  for (int it = 0; it < iterations; ++it) {
    CVector g = sqrt_form_gradient(d, f, floor);
    if (p.lambda1 > 0.0) g -= p.lambda1 * sqrt_form_gradient(sl, f, floor);
    if (p.lambda2 > 0.0) g -= p.lambda2 * sqrt_form_gradient(sg, f, floor);
    const CVector tangent = g - inner(g, f).real() * f;
    const double slope = tangent.squaredNorm();
    if (!(slope > 1e-28)) break;
    bool moved = false;
    while (step > 1e-14) {
      CVector trial = f + step * tangent;
      trial.normalize();
      const double tv = ratio(trial);
      if (tv > value + 1e-4 * step * slope) {
        f = std::move(trial);
        value = tv;
        moved = true;
        step = std::min(step * 2.0, 1e6);
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {value, f};
}

CVector eigenvector(const CMatrix& a, bool top) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  return solver.eigenvectors().col(top ? a.rows() - 1 : 0);
}

}  // namespace

double condition_ratio(const CMatrix& d, const CMatrix& s_lambda, const CMatrix& s_gamma, const PerturbationParams& params,
                       const CVector& f) {
  return std::sqrt(form(d, f)) - params.lambda1 * std::sqrt(form(s_lambda, f)) -
         params.lambda2 * std::sqrt(form(s_gamma, f)) - params.mu * f.norm();
}

AscentResult maximize_condition_ratio(const CMatrix& d, const CMatrix& s_lambda, const CMatrix& s_gamma,
                                      const PerturbationParams& params, const AscentOptions& options) {
  const auto n = static_cast<std::size_t>(d.rows());
  const int starts = std::max(options.starts, 1);
  const double scale = std::max({1.0, spectral_norm(d), spectral_norm(s_lambda), spectral_norm(s_gamma)});
  const double floor = 1e-30 * scale;

  std::vector<CVector> initial(static_cast<std::size_t>(starts));
  for (int s = 0; s < starts; ++s) {
    if (s == 0) {
      initial[0] = eigenvector(d, true);
    } else if (s == 1) {
      initial[1] = eigenvector(s_gamma, false);
    } else if (s == 2) {
      initial[2] = eigenvector(s_lambda, false);
    } else {
      auto rng = trial_rng(options.seed, static_cast<std::uint64_t>(s));
      initial[static_cast<std::size_t>(s)] = random_unit_vector(n, rng);
    }
  }

  std::vector<StartResult> results(static_cast<std::size_t>(starts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < starts; ++s)
    results[static_cast<std::size_t>(s)] =
        ascend(d, s_lambda, s_gamma, params, initial[static_cast<std::size_t>(s)], options.iterations, floor);

  AscentResult out;
  for (int s = 0; s < starts; ++s) {
    const auto& r = results[static_cast<std::size_t>(s)];
    out.per_start.push_back(r.value);
    if (out.best_start < 0 || r.value > out.best) {
      out.best = r.value;
      out.argmax = r.f;
      out.best_start = s;
    }
  }
  return out;
}

ConditionResult check_condition(const GOperatorFamily& lambda, const GOperatorFamily& gamma,
                                const PerturbationParams& params, const AscentOptions& options) {
  const Operators ops = operators_of(lambda, gamma);
  const HermitianSpectrum sd(ops.d), sl(ops.s_lambda), sg(ops.s_gamma);

  ConditionResult out;
  out.certificate_lhs = std::sqrt(std::max(sd.max(), 0.0));
  out.certificate_rhs = params.lambda1 * std::sqrt(std::max(sl.min(), 0.0)) +
                        params.lambda2 * std::sqrt(std::max(sg.min(), 0.0)) + params.mu;
  // Rounding-level slack only: both sides are O(1) spectral quantities.
  if (out.certificate_lhs <= out.certificate_rhs + 1e-12 * std::max(1.0, out.certificate_rhs)) {
    out.status = ConditionStatus::CertifiedSufficient;
    return out;
  }

  const AscentResult ascent = maximize_condition_ratio(ops.d, ops.s_lambda, ops.s_gamma, params, options);
  const double tol = options.tol >= 0.0 ? options.tol : 1e-9 * std::max(1.0, std::sqrt(std::max(sl.max(), 0.0)));
  out.max_ratio = ascent.best;
  out.witness = ascent.argmax;
  out.status = ascent.best > tol ? ConditionStatus::CounterexampleFound : ConditionStatus::SampledOnly;
  return out;
}

FrameBounds predicted_bounds(double lower, double upper, const PerturbationParams& params) {
  if (!params.gate_holds(lower))
    throw GateError("perturbation gate max(lambda1 + mu/sqrt(A), lambda2) < 1 fails for A = " + std::to_string(lower));
  if (upper < lower) throw GateError("predicted_bounds: upper bound below lower bound");
  const double l = params.lambda1 + params.lambda2;
  const double down = 1.0 - (l + params.mu / std::sqrt(lower)) / (1.0 + params.lambda2);
  const double up = 1.0 + (l + params.mu / std::sqrt(upper)) / (1.0 - params.lambda2);
  return {lower * down * down, upper * up * up};
}

PerturbationVerdict assess_perturbation(const GOperatorFamily& lambda, const GOperatorFamily& gamma,
                                        const PerturbationParams& params, const AscentOptions& options) {
  PerturbationVerdict v;
  v.original = frame_bounds(lambda);
  v.actual = frame_bounds(gamma);
  v.gate = params.gate_holds(v.original.lower);
  if (v.gate) v.predicted = predicted_bounds(v.original.lower, v.original.upper, params);
  v.condition = check_condition(lambda, gamma, params, options);
  return v;
}

namespace {

void add_containment(VerificationReport& report, const FrameBounds& predicted, const FrameBounds& actual, double rel_tol,
                     const std::string& note) {
  const double lower_slack = actual.lower - predicted.lower;
  const double lower_tol = rel_tol * std::max(1.0, std::abs(predicted.lower));
  report.add({"lower_containment", 0.0, lower_slack, lower_tol, lower_slack >= -lower_tol,
              "predicted " + std::to_string(predicted.lower) + " <= actual " + std::to_string(actual.lower) + note});
  const double upper_slack = predicted.upper - actual.upper;
  const double upper_tol = rel_tol * std::max(1.0, std::abs(predicted.upper));
  report.add({"upper_containment", 0.0, upper_slack, upper_tol, upper_slack >= -upper_tol,
              "actual " + std::to_string(actual.upper) + " <= predicted " + std::to_string(predicted.upper) + note});
}

}  // namespace

VerificationReport verify_perturbation_theorem(const GOperatorFamily& lambda, const GOperatorFamily& gamma,
                                               const PerturbationParams& params, const AscentOptions& options,
                                               double rel_tol) {
  const FrameBounds original = frame_bounds(lambda);
  if (!params.gate_holds(original.lower))
    throw GateError("perturbation gate fails for A = " + std::to_string(original.lower));
  const PerturbationVerdict v = assess_perturbation(lambda, gamma, params, options);

  VerificationReport report;
  report.name = "perturbation_theorem";
  report.seed = options.seed;
  CheckResult hypothesis{"condition", v.condition.certificate_lhs - v.condition.certificate_rhs, 0.0, 0.0, true,
                         to_string(v.condition.status)};
  switch (v.condition.status) {
    case ConditionStatus::CertifiedSufficient:
      report.add(hypothesis);
      add_containment(report, *v.predicted, v.actual, rel_tol, "");
      break;
    case ConditionStatus::SampledOnly:
      hypothesis.note += ": condition not certified; containment checked empirically";
      report.add(hypothesis);
      add_containment(report, *v.predicted, v.actual, rel_tol, " (sampled)");
      break;
    case ConditionStatus::CounterexampleFound:
      hypothesis.residual = v.condition.max_ratio.value_or(0.0);
      hypothesis.note += ": condition violated at the witness, no conclusion to check";
      report.add(hypothesis);
      report.note = "not applicable";
      break;
  }
  report.add({"original_lower", v.original.lower, 0.0, 0.0, true, ""});
  report.add({"original_upper", v.original.upper, 0.0, 0.0, true, ""});
  report.add({"actual_lower", v.actual.lower, 0.0, 0.0, true, ""});
  report.add({"actual_upper", v.actual.upper, 0.0, 0.0, true, ""});
  report.add({"predicted_lower", v.predicted->lower, 0.0, 0.0, true, ""});
  report.add({"predicted_upper", v.predicted->upper, 0.0, 0.0, true, ""});
  return report;
}

VerificationReport verify_corollary_m(const GOperatorFamily& lambda, const GOperatorFamily& gamma, double rel_tol) {
  VerificationReport report;
  report.name = "corollary_m";
  const FrameBounds original = frame_bounds(lambda);
  const double m = std::max(0.0, HermitianSpectrum(frame_operator(difference_family(lambda, gamma)).matrix()).max());
  report.add({"m", m, original.lower - m, 0.0, true, "M = lambda_max(D), slack = A - M"});
  if (!(m < original.lower)) {
    report.note = "NotApplicable";
    report.checks.back().note += "; NotApplicable (M >= A)";
    return report;
  }
  const double a = original.lower;
  const double b = original.upper;
  const double down = 1.0 - std::sqrt(m / a);
  const double up = 1.0 + std::sqrt(m / b);
  const FrameBounds corollary{a * down * down, b * up * up};
  const FrameBounds theorem = predicted_bounds(a, b, {0.0, 0.0, std::sqrt(m)});
  const double agreement = std::max(std::abs(corollary.lower - theorem.lower), std::abs(corollary.upper - theorem.upper));
  const double agreement_tol = 1e-12 * std::max(1.0, b);
  report.add({"formula_agreement", agreement, 0.0, agreement_tol, agreement <= agreement_tol,
              "corollary bounds equal theorem bounds with l1 = l2 = 0, mu = sqrt(M)"});
  add_containment(report, corollary, frame_bounds(gamma), rel_tol, "");
  return report;
}

RemarkProbe remark_counterexample_probe(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ConfigError("remark probe needs dimension >= 2");
  CMatrix u = CMatrix::Identity(n, n);
  CVector v = CVector::Zero(n);
  v(n - 1) = 1.0;
  if (seed != 0) {
    auto rng = trial_rng(seed, 0);
    u = random_unitary(n, rng);
    v = random_unit_vector(n, rng);
  }
  const CMatrix projector = CMatrix::Identity(n, n) - v * v.adjoint();
  DiscreteMeasureSpace space(std::vector<double>{1.0});
  IndexSet index(1);

  RemarkProbe probe{GOperatorFamily(space, index, n, {u}), GOperatorFamily(space, index, n, {u * projector}),
                    PerturbationParams{1.0, 0.0, 0.0}, v, true, 0.0, {}};
  const FrameBounds lambda_bounds = frame_bounds(probe.lambda);
  probe.gate = probe.params.gate_holds(lambda_bounds.lower);
  probe.gamma_lower = HermitianSpectrum(frame_operator(probe.gamma).matrix()).min();
  probe.condition = check_condition(probe.lambda, probe.gamma, probe.params, {.seed = seed});
  return probe;
}

}  // namespace gframe
