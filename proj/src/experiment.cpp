#include "gframe/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "gframe/errors.hpp"
#include "gframe/fiber.hpp"
#include "gframe/fixtures.hpp"
#include "gframe/frame.hpp"
#include "gframe/identities.hpp"
#include "gframe/linalg.hpp"
#include "gframe/perturbation.hpp"
#include "gframe/serialize.hpp"

namespace gframe {

const char* const kToolVersion = "0.1.0";

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::FrameAnalysis: return "FrameAnalysis";
    case ExperimentKind::IdentitySuite: return "IdentitySuite";
    case ExperimentKind::PerturbationStudy: return "PerturbationStudy";
    case ExperimentKind::FiberizationDemo: return "FiberizationDemo";
  }
  return "Unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::FrameAnalysis, ExperimentKind::IdentitySuite, ExperimentKind::PerturbationStudy,
                 ExperimentKind::FiberizationDemo})
    if (name == to_string(k)) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Schema validation

namespace {

class Validator {
 public:
  explicit Validator(fs::path base) : base_(std::move(base)) {}

  std::vector<SchemaIssue> issues;

  void issue(const std::string& path, const std::string& msg) { issues.push_back({path, msg}); }

  bool object(const json& j, const std::string& path) {
    if (!j.is_object()) {
      issue(path, "expected an object");
      return false;
    }
    return true;
  }

  void known_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [key, _] : j.items()) {
      bool ok = false;
      for (const char* k : keys) ok = ok || key == k;
      if (!ok) issue(path + "/" + key, "unknown field");
    }
  }

  void positive_int(const json& j, const std::string& key, const std::string& path, bool required,
                    std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
    if (!j.contains(key)) {
      if (required) issue(path + "/" + key, "missing required field");
      return;
    }
    const auto& v = j[key];
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0 || v.get<std::uint64_t>() > max)
      issue(path + "/" + key, "expected a positive integer" + (max < 1000000 ? " <= " + std::to_string(max) : ""));
  }

  void nonneg_number(const json& j, const std::string& key, const std::string& path, bool required, bool strict = false) {
    if (!j.contains(key)) {
      if (required) issue(path + "/" + key, "missing required field");
      return;
    }
    const auto& v = j[key];
    if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0.0 || (strict && v.get<double>() == 0.0))
      issue(path + "/" + key, strict ? "expected a positive number" : "expected a number >= 0");
  }

  void family_source(const json& j, const std::string& path) {
    if (!object(j, path)) return;
    const int n = static_cast<int>(j.contains("file")) + static_cast<int>(j.contains("inline")) +
                  static_cast<int>(j.contains("generator"));
    if (n != 1) {
      issue(path, "expected exactly one of \"file\", \"inline\", \"generator\"");
      return;
    }
    known_keys(j, path, {"file", "inline", "generator"});
    if (j.contains("file")) {
      if (!j["file"].is_string()) {
        issue(path + "/file", "expected a path string");
      } else if (!fs::exists(base_ / j["file"].get<std::string>())) {
        issue(path + "/file", "file not found: " + (base_ / j["file"].get<std::string>()).string());
      }
    } else if (j.contains("inline")) {
      try {
        (void)family_from_json(j["inline"]);
      } catch (const ConfigError& e) {
        issue(path + "/inline", e.what());
      }
    } else {
      const auto& g = j["generator"];
      const std::string gp = path + "/generator";
      if (!object(g, gp)) return;
      known_keys(g, gp, {"type", "dim", "points", "indices", "max_codim", "seed", "real"});
      if (!g.contains("type") || !g["type"].is_string()) {
        issue(gp + "/type", "expected \"random\", \"parseval\" or \"identity\"");
      } else {
        const auto t = g["type"].get<std::string>();
        if (t != "random" && t != "parseval" && t != "identity") issue(gp + "/type", "unknown generator type '" + t + "'");
      }
      positive_int(g, "dim", gp, true, 4096);
      positive_int(g, "points", gp, false, 4096);
      positive_int(g, "indices", gp, false, 4096);
      positive_int(g, "max_codim", gp, false, 4096);
      if (g.contains("seed") && !g["seed"].is_number_unsigned()) issue(gp + "/seed", "expected an unsigned 64-bit integer");
      if (g.contains("real") && !g["real"].is_boolean()) issue(gp + "/real", "expected a boolean");
    }
  }

  void lambda_grid(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
      issue(path, "expected a nonempty array of numbers in [0, 1]");
      return;
    }
    for (std::size_t k = 0; k < j.size(); ++k)
      if (!j[k].is_number() || j[k].get<double>() < 0.0 || j[k].get<double>() > 1.0)
        issue(path + "/" + std::to_string(k), "expected a number in [0, 1]");
  }

  void masks(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
      issue(path, "expected a nonempty array of boolean arrays");
      return;
    }
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (!j[k].is_array()) {
        issue(path + "/" + std::to_string(k), "expected a boolean array");
        continue;
      }
      for (const auto& b : j[k])
        if (!b.is_boolean()) {
          issue(path + "/" + std::to_string(k), "expected a boolean array");
          break;
        }
    }
  }

  void complex_vector(const json& j, const std::string& path) {
    try {
      (void)vector_from_json(j);
    } catch (const ConfigError& e) {
      issue(path, e.what());
    }
  }

 private:
  fs::path base_;
};

}  // namespace

std::vector<SchemaIssue> validate_config(const json& config, const fs::path& base_dir) {
  Validator v(base_dir);
  if (!v.object(config, "")) return v.issues;
  v.known_keys(config, "", {"kind", "seed", "tolerance", "output", "family", "trials", "samples", "lambda_grid", "masks",
                            "alternate_dual", "parsevalize", "expect", "perturbed", "perturbation", "params", "ascent",
                            "periodization", "scale", "shift_system", "signals", "description"});
  std::optional<ExperimentKind> kind;
  if (!config.contains("kind")) {
    v.issue("/kind", "missing required field");
  } else if (!config["kind"].is_string() || !(kind = parse_experiment_kind(config["kind"].get<std::string>()))) {
    v.issue("/kind", "expected one of FrameAnalysis, IdentitySuite, PerturbationStudy, FiberizationDemo");
  }
  if (config.contains("seed") && !config["seed"].is_number_unsigned())
    v.issue("/seed", "expected an unsigned 64-bit integer");
  v.nonneg_number(config, "tolerance", "", false, true);
  if (config.contains("output")) {
    const auto& o = config["output"];
    if (v.object(o, "/output")) {
      v.known_keys(o, "/output", {"report", "summary"});
      for (const char* k : {"report", "summary"})
        if (o.contains(k) && !o[k].is_string()) v.issue(std::string("/output/") + k, "expected a path string");
    }
  }
  v.positive_int(config, "trials", "", false, 1000000);
  v.positive_int(config, "samples", "", false, 1000000);
  if (config.contains("description") && !config["description"].is_string()) v.issue("/description", "expected a string");
  if (!kind) return v.issues;

  const bool needs_family = *kind != ExperimentKind::FiberizationDemo;
  if (config.contains("family")) {
    v.family_source(config["family"], "/family");
  } else if (needs_family) {
    v.issue("/family", "missing required field");
  }

  switch (*kind) {
    case ExperimentKind::FrameAnalysis:
      if (config.contains("expect")) {
        const auto& e = config["expect"];
        if (v.object(e, "/expect")) {
          v.known_keys(e, "/expect", {"lower", "upper", "parseval", "frame", "tolerance"});
          for (const char* k : {"lower", "upper"})
            if (e.contains(k) && !e[k].is_number()) v.issue(std::string("/expect/") + k, "expected a number");
          for (const char* k : {"parseval", "frame"})
            if (e.contains(k) && !e[k].is_boolean()) v.issue(std::string("/expect/") + k, "expected a boolean");
          v.nonneg_number(e, "tolerance", "/expect", false, true);
        }
      }
      break;
    case ExperimentKind::IdentitySuite:
      if (config.contains("lambda_grid")) v.lambda_grid(config["lambda_grid"], "/lambda_grid");
      if (config.contains("masks")) v.masks(config["masks"], "/masks");
      if (config.contains("alternate_dual")) v.family_source(config["alternate_dual"], "/alternate_dual");
      if (config.contains("parsevalize") && !config["parsevalize"].is_boolean())
        v.issue("/parsevalize", "expected a boolean");
      break;
    case ExperimentKind::PerturbationStudy: {
      if (config.contains("perturbed") == config.contains("perturbation"))
        v.issue("/perturbed", "expected exactly one of \"perturbed\" (family source) or \"perturbation\" (noise spec)");
      if (config.contains("perturbed")) v.family_source(config["perturbed"], "/perturbed");
      if (config.contains("perturbation")) {
        const auto& p = config["perturbation"];
        if (v.object(p, "/perturbation")) {
          v.known_keys(p, "/perturbation", {"scale", "relative", "seed"});
          v.nonneg_number(p, "scale", "/perturbation", true);
          if (p.contains("relative") && !p["relative"].is_boolean()) v.issue("/perturbation/relative", "expected a boolean");
          if (p.contains("seed") && !p["seed"].is_number_unsigned())
            v.issue("/perturbation/seed", "expected an unsigned 64-bit integer");
        }
      }
      if (!config.contains("params")) {
        v.issue("/params", "missing required field");
      } else if (v.object(config["params"], "/params")) {
        v.known_keys(config["params"], "/params", {"lambda1", "lambda2", "mu", "relative_mu"});
        for (const char* k : {"lambda1", "lambda2", "mu"}) v.nonneg_number(config["params"], k, "/params", true);
        if (config["params"].contains("relative_mu") && !config["params"]["relative_mu"].is_boolean())
          v.issue("/params/relative_mu", "expected a boolean");
      }
      if (config.contains("ascent") && v.object(config["ascent"], "/ascent")) {
        v.known_keys(config["ascent"], "/ascent", {"starts", "iterations"});
        v.positive_int(config["ascent"], "starts", "/ascent", false, 100000);
        v.positive_int(config["ascent"], "iterations", "/ascent", false, 1000000);
      }
      break;
    }
    case ExperimentKind::FiberizationDemo: {
      if (!config.contains("periodization") && !config.contains("shift_system"))
        v.issue("", "FiberizationDemo needs \"periodization\" and/or \"shift_system\"");
      if (config.contains("periodization")) {
        const auto& p = config["periodization"];
        if (v.object(p, "/periodization")) {
          v.known_keys(p, "/periodization", {"N", "M", "weights"});
          v.positive_int(p, "N", "/periodization", true, 1 << 16);
          v.positive_int(p, "M", "/periodization", true, 1 << 16);
          if (p.contains("N") && p.contains("M") && p["N"].is_number_unsigned() && p["M"].is_number_unsigned() &&
              p["M"].get<std::uint64_t>() > 0 && p["N"].get<std::uint64_t>() % p["M"].get<std::uint64_t>() != 0)
            v.issue("/periodization/M", "M must divide N");
          if (p.contains("weights")) {
            const auto& w = p["weights"];
            if (!w.is_array()) {
              v.issue("/periodization/weights", "expected an array of positive numbers");
            } else {
              if (p.contains("N") && p["N"].is_number_unsigned() && w.size() != p["N"].get<std::size_t>())
                v.issue("/periodization/weights", "expected N entries");
              for (std::size_t k = 0; k < w.size(); ++k)
                if (!w[k].is_number() || !(w[k].get<double>() > 0.0))
                  v.issue("/periodization/weights/" + std::to_string(k), "expected a positive number");
            }
          }
        }
      }
      v.nonneg_number(config, "scale", "", false, true);
      if (config.contains("shift_system")) {
        const auto& s = config["shift_system"];
        if (v.object(s, "/shift_system")) {
          v.known_keys(s, "/shift_system", {"N", "p", "generators", "random_generators", "extra_shifts"});
          v.positive_int(s, "N", "/shift_system", true, 1 << 12);
          v.positive_int(s, "p", "/shift_system", true, 1 << 12);
          if (s.contains("N") && s.contains("p") && s["N"].is_number_unsigned() && s["p"].is_number_unsigned() &&
              s["p"].get<std::uint64_t>() > 0 && s["N"].get<std::uint64_t>() % s["p"].get<std::uint64_t>() != 0)
            v.issue("/shift_system/p", "p must divide N");
          if (s.contains("generators") == s.contains("random_generators"))
            v.issue("/shift_system/generators", "expected exactly one of \"generators\" or \"random_generators\"");
          if (s.contains("generators")) {
            if (!s["generators"].is_array() || s["generators"].empty()) {
              v.issue("/shift_system/generators", "expected a nonempty array of complex vectors");
            } else {
              for (std::size_t k = 0; k < s["generators"].size(); ++k) {
                const std::string gp = "/shift_system/generators/" + std::to_string(k);
                v.complex_vector(s["generators"][k], gp);
                if (s.contains("N") && s["N"].is_number_unsigned() && s["generators"][k].is_array() &&
                    s["generators"][k].size() != s["N"].get<std::size_t>())
                  v.issue(gp, "expected N entries");
              }
            }
          }
          v.positive_int(s, "random_generators", "/shift_system", false, 1024);
          if (s.contains("extra_shifts")) {
            const auto& e = s["extra_shifts"];
            if (!e.is_array() || e.empty()) {
              v.issue("/shift_system/extra_shifts", "expected a nonempty array of integers");
            } else {
              for (std::size_t k = 0; k < e.size(); ++k)
                if (!e[k].is_number_integer()) v.issue("/shift_system/extra_shifts/" + std::to_string(k), "expected an integer");
            }
          }
        }
      }
      v.positive_int(config, "signals", "", false, 1000000);
      break;
    }
  }
  return v.issues;
}

// ---------------------------------------------------------------------------
// Running

namespace {

GOperatorFamily identity_family(std::size_t dim) {
  return GOperatorFamily(DiscreteMeasureSpace(std::vector<double>{1.0}), IndexSet(1), dim,
                         {CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))});
}

GOperatorFamily load_source(const json& src, const fs::path& base, std::uint64_t seed) {
  if (src.contains("file")) return load_family(base / src["file"].get<std::string>());
  if (src.contains("inline")) return family_from_json(src["inline"]);
  const auto& g = src["generator"];
  const auto type = g["type"].get<std::string>();
  const auto dim = g["dim"].get<std::size_t>();
  if (type == "identity") return identity_family(dim);
  RandomFamilySpec spec;
  spec.dim = dim;
  spec.points = g.value("points", std::size_t{3});
  spec.indices = g.value("indices", std::size_t{2});
  spec.max_codim = g.value("max_codim", std::size_t{2});
  spec.complex_entries = !g.value("real", false);
  auto rng = trial_rng(g.value("seed", seed), 0);
  GOperatorFamily family = random_family(spec, rng);
  return type == "parseval" ? parsevalize(family) : family;
}

// Folds many per-trial checks into one CheckResult: worst residual,
// worst slack, all-passed.
class Aggregate {
 public:
  explicit Aggregate(std::string name) : name_(std::move(name)) {}

  void equality(double residual, double tol) {
    ++count_;
    worst_residual_ = std::max(worst_residual_, residual);
    worst_ratio_ = std::max(worst_ratio_, tol > 0.0 ? residual / tol : (residual > 0.0 ? 1e300 : 0.0));
    tol_ = std::max(tol_, tol);
    passed_ = passed_ && residual <= tol;
  }

  void inequality(double slack, double tol) {
    ++count_;
    has_slack_ = true;
    worst_slack_ = std::min(worst_slack_, slack);
    tol_ = std::max(tol_, tol);
    passed_ = passed_ && slack >= -tol;
  }

  void add(const IdentityCheck& c) {
    if (c.inequality) {
      inequality(c.slack, c.tolerance);
    } else {
      equality(c.residual(), c.tolerance);
    }
  }

  void fail(const std::string& why) {
    ++count_;
    passed_ = false;
    if (error_.empty()) error_ = why;
  }

  CheckResult result() const {
    CheckResult r;
    r.name = name_;
    r.residual = worst_residual_;
    r.slack = has_slack_ ? worst_slack_ : 0.0;
    r.tolerance = tol_;
    r.passed = passed_ && count_ > 0;
    r.note = std::to_string(count_) + " evaluations";
    if (!error_.empty()) r.note += "; " + error_;
    return r;
  }

 private:
  std::string name_;
  std::size_t count_ = 0;
  double worst_residual_ = 0.0;
  double worst_ratio_ = 0.0;
  double worst_slack_ = std::numeric_limits<double>::infinity();
  bool has_slack_ = false;
  double tol_ = 0.0;
  bool passed_ = true;
  std::string error_;
};

CheckResult bound_check(const std::string& name, double value, double expected, double tol) {
  const double r = std::abs(value - expected);
  return {name, r, 0.0, tol, r <= tol, "value " + std::to_string(value) + ", expected " + std::to_string(expected)};
}

std::vector<SubsetMask> parse_masks(const json& j, std::size_t points) {
  std::vector<SubsetMask> out;
  for (const auto& m : j) {
    std::vector<bool> included;
    for (const auto& b : m) included.push_back(b.get<bool>());
    if (included.size() != points)
      throw ConfigError("/masks: mask length " + std::to_string(included.size()) + " does not match " +
                        std::to_string(points) + " points");
    out.emplace_back(std::move(included));
  }
  return out;
}

VerificationReport run_frame_analysis(const json& config, const GOperatorFamily& family, std::uint64_t seed, double tol) {
  VerificationReport r;
  r.name = "frame_analysis";
  r.seed = seed;
  r.inputs_digest = digest_hex(family_to_json(family).dump());

  const auto violations = validate_family(family);
  r.add({"validate_family", static_cast<double>(violations.size()), 0.0, 0.0, violations.empty(),
         violations.empty() ? "no violations" : violations.front().message});
  if (!violations.empty()) return r;

  const FrameBounds bounds = frame_bounds(family);
  r.add({"lower_bound", bounds.lower, 0.0, 0.0, true, "A = lambda_min(S)"});
  r.add({"upper_bound", bounds.upper, 0.0, 0.0, true, "B = lambda_max(S)"});
  const bool frame = is_frame(family);
  const bool parseval = is_parseval(family, tol);
  r.add({"is_frame", frame ? 1.0 : 0.0, 0.0, 0.0, true, frame ? "frame" : "not a frame (A = 0)"});
  r.add({"is_parseval", parseval ? 1.0 : 0.0, 0.0, 0.0, true, parseval ? "Parseval" : "not Parseval"});

  if (config.contains("expect")) {
    const auto& e = config["expect"];
    const double etol = e.value("tolerance", tol);
    if (e.contains("lower")) r.add(bound_check("expected_lower", bounds.lower, e["lower"].get<double>(), etol));
    if (e.contains("upper")) r.add(bound_check("expected_upper", bounds.upper, e["upper"].get<double>(), etol));
    if (e.contains("frame"))
      r.add({"expected_frame", 0.0, 0.0, 0.0, e["frame"].get<bool>() == frame, frame ? "is a frame" : "not a frame"});
    if (e.contains("parseval"))
      r.add({"expected_parseval", 0.0, 0.0, 0.0, e["parseval"].get<bool>() == parseval,
             parseval ? "is Parseval" : "not Parseval"});
  }

  const std::size_t samples = config.value("samples", std::size_t{100});
  Aggregate rayleigh("rayleigh_consistency");
  Aggregate partition("partition_additivity");
  Aggregate energy_form("energy_matches_quadratic_form");
  const CMatrix s = frame_operator(family).matrix();
  for (std::size_t t = 0; t < samples; ++t) {
    auto rng = trial_rng(seed, t);
    const CVector f = random_unit_vector(family.dim(), rng);
    const SubsetMask mask = random_mask(family.num_points(), rng);
    const double e = analysis_energy(family, f);
    const double rtol = 1e-10 * std::max(1.0, bounds.upper);
    rayleigh.inequality(std::min(e - bounds.lower, bounds.upper - e), rtol);
    const double split = analysis_energy(family, f, mask) + analysis_energy(family, f, mask.complement());
    partition.equality(std::abs(split - e), 1e-10 * std::max(1.0, e));
    const CMatrix s1 = frame_operator(family, mask).matrix();
    energy_form.equality(std::abs(inner(s1 * f, f).real() - analysis_energy(family, f, mask)), 1e-10 * std::max(1.0, e));
  }
  r.add(rayleigh.result());
  r.add(partition.result());
  r.add(energy_form.result());

  if (frame) {
    const DualFamily dual = canonical_dual(family);
    const FrameBounds db = frame_bounds(dual.family);
    const double lrel = std::abs(db.lower - 1.0 / bounds.upper) * bounds.upper;
    const double urel = std::abs(db.upper - 1.0 / bounds.lower) * bounds.lower;
    r.add({"dual_bounds", std::max(lrel, urel), 0.0, tol, std::max(lrel, urel) <= tol, "bounds(dual) = (1/B, 1/A)"});
    Aggregate recon("canonical_reconstruction");
    for (std::size_t t = 0; t < std::min<std::size_t>(samples, 16); ++t) {
      auto rng = trial_rng(seed ^ 0x5bd1e995ULL, t);
      const CVector f = random_unit_vector(family.dim(), rng);
      recon.equality(reconstruction_residual(family, dual.family, f), tol);
    }
    r.add(recon.result());
  }
  return r;
}

struct IdentityTrial {
  std::vector<IdentityCheck> parseval, canonical, alternate, contrast;
  std::optional<IdentityCheck> complex;
  std::optional<double> re_gap;
  std::optional<OperatorLemmaCheck> lemma;
  std::vector<std::pair<std::string, std::string>> errors;
};

VerificationReport run_identity_suite(const json& config, const fs::path& base, const GOperatorFamily& family,
                                      std::uint64_t seed, double tol) {
  VerificationReport r;
  r.name = "identity_suite";
  r.seed = seed;
  r.inputs_digest = digest_hex(family_to_json(family).dump());
  require_valid(family);

  const std::size_t trials = config.value("trials", std::size_t{100});
  const std::vector<double> grid =
      config.contains("lambda_grid") ? config["lambda_grid"].get<std::vector<double>>() : default_lambda_grid();
  const std::vector<SubsetMask> masks =
      config.contains("masks") ? parse_masks(config["masks"], family.num_points()) : std::vector<SubsetMask>{};
  const double ineq_tol = tol / 10.0;

  std::optional<GOperatorFamily> parseval;
  std::optional<GOperatorFamily> alt;
  std::string setup_error;
  try {
    parseval = config.value("parsevalize", true) ? parsevalize(family) : family;
    if (config.contains("alternate_dual")) {
      alt = load_source(config["alternate_dual"], base, seed);
    } else {
      auto rng = trial_rng(seed, std::numeric_limits<std::uint32_t>::max());
      alt = nullspace_alternate_dual(family, rng);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const FrameError& e) {
    setup_error = e.what();
  }
  if (!setup_error.empty()) {
    r.add({"setup", 0.0, 0.0, 0.0, false, setup_error});
    return r;
  }

  const VerificationReport duality = verify_alternate_dual(family, *alt, tol);
  for (const auto& c : duality.checks) {
    CheckResult named = c;
    named.name = "alternate_dual." + c.name;
    r.add(named);
  }
  const bool alt_ok = duality.passed();

  std::vector<IdentityTrial> results(trials);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    const SubsetMask mask = masks.empty() ? random_mask(family.num_points(), rng) : masks[t % masks.size()];
    const CVector f = random_unit_vector(family.dim(), rng);
    IdentityTrial& out = results[t];
    try {
      out.parseval.push_back(verify_parseval_identity(*parseval, mask, f, tol));
      const auto contrast = verify_canonical_dual_inequality(*parseval, mask, f, {0.5}, tol, ineq_tol);
      // lambda = 1/2 on a Parseval family: E(f, X1) + ||S_{X1^c} f||^2 >= 3/4 ||f||^2.
      const double value = contrast[0].lhs.real();
      out.contrast.push_back(IdentityCheck::lower_bound(IdentityKind::CanonicalDualInequality, value,
                                                        0.75 * f.squaredNorm(), ineq_tol, {f, mask, 0.5}));
      const FrameOperator s1 = frame_operator(*parseval, mask);
      const FrameOperator s2 = frame_operator(*parseval, mask.complement());
      out.lemma = check_operator_lemma_pq(s1.matrix(), s2.matrix(), grid, ineq_tol);
    } catch (const FrameError& e) {
      out.errors.emplace_back("parseval_identity", e.what());
    }
    try {
      out.canonical = verify_canonical_dual_inequality(family, mask, f, grid, tol, ineq_tol);
    } catch (const FrameError& e) {
      out.errors.emplace_back("canonical_dual", e.what());
    }
    if (alt_ok) {
      try {
        out.alternate = verify_alternate_dual_inequality(family, *alt, mask, f, grid, tol, ineq_tol, tol);
        out.complex = verify_general_complex_identity(family, *alt, mask, f, ineq_tol, tol);
        const double gap = std::max(std::abs(out.complex->lhs.real() - out.alternate[0].lhs.real()),
                                    std::abs(out.complex->rhs.real() - out.alternate[0].rhs.real()));
        out.re_gap = gap;
      } catch (const FrameError& e) {
        out.errors.emplace_back("alternate_dual", e.what());
      }
    }
  }

  Aggregate parseval_agg("parseval_identity"), contrast_agg("three_quarter_contrast"), lemma_eq("operator_lemma_equality"),
      lemma_ineq("operator_lemma_inequality"), canon_eq("canonical_dual_equality"), canon_ineq("canonical_dual_lower_bound"),
      alt_eq("alternate_dual_equality"), alt_ineq("alternate_dual_lower_bound"), complex_agg("general_complex_identity"),
      re_agg("re_consistency");
  for (const auto& t : results) {
    for (const auto& c : t.parseval) parseval_agg.add(c);
    for (const auto& c : t.contrast) contrast_agg.add(c);
    if (t.lemma) {
      lemma_eq.add(t.lemma->equality);
      for (const auto& c : t.lemma->expansions) lemma_eq.add(c);
      for (const auto& c : t.lemma->lower_bounds) lemma_ineq.add(c);
    }
    for (const auto& c : t.canonical) (c.inequality ? canon_ineq : canon_eq).add(c);
    for (const auto& c : t.alternate) (c.inequality ? alt_ineq : alt_eq).add(c);
    if (t.complex) complex_agg.add(*t.complex);
    if (t.re_gap) re_agg.equality(*t.re_gap, 1e-12 * std::max(1.0, std::abs(t.alternate[0].lhs)));
    for (const auto& [where, what] : t.errors) {
      if (where == "parseval_identity") parseval_agg.fail(what);
      if (where == "canonical_dual") canon_eq.fail(what);
      if (where == "alternate_dual") alt_eq.fail(what);
    }
  }
  for (const auto* a : {&parseval_agg, &contrast_agg, &lemma_eq, &lemma_ineq, &canon_eq, &canon_ineq})
    r.add(a->result());
  if (alt_ok) {
    for (const auto* a : {&alt_eq, &alt_ineq, &complex_agg, &re_agg}) r.add(a->result());
  } else {
    r.note = "alternate-dual checks skipped: candidate is not an alternate dual";
  }
  return r;
}

std::vector<VerificationReport> run_perturbation_study(const json& config, const fs::path& base,
                                                      const GOperatorFamily& lambda, std::uint64_t seed) {
  const FrameBounds original = frame_bounds(lambda);
  GOperatorFamily gamma;
  if (config.contains("perturbed")) {
    gamma = load_source(config["perturbed"], base, seed);
  } else {
    const auto& p = config["perturbation"];
    double target = p["scale"].get<double>();
    if (p.value("relative", false)) target *= std::sqrt(original.lower);
    auto rng = trial_rng(p.value("seed", seed), 1);
    gamma = scaled_perturbation(lambda, target, rng);
  }
  if (!lambda.same_shape(gamma)) throw ConfigError("/perturbed: family shape differs from /family");

  const auto& pj = config["params"];
  PerturbationParams params{pj["lambda1"].get<double>(), pj["lambda2"].get<double>(), pj["mu"].get<double>()};
  if (pj.value("relative_mu", false)) params.mu *= std::sqrt(original.lower);
  AscentOptions ascent;
  ascent.seed = seed;
  if (config.contains("ascent")) {
    ascent.starts = config["ascent"].value("starts", ascent.starts);
    ascent.iterations = config["ascent"].value("iterations", ascent.iterations);
  }

  std::vector<VerificationReport> out;
  const std::string digest = digest_hex(family_to_json(lambda).dump() + family_to_json(gamma).dump());
  if (params.gate_holds(original.lower)) {
    out.push_back(verify_perturbation_theorem(lambda, gamma, params, ascent));
  } else {
    VerificationReport gate;
    gate.name = "perturbation_theorem";
    gate.seed = seed;
    const double lhs = std::max(params.lambda1 + params.mu / std::sqrt(std::max(original.lower, 1e-300)), params.lambda2);
    gate.add({"gate", lhs, 1.0 - lhs, 0.0, false, "max(lambda1 + mu/sqrt(A), lambda2) < 1 fails; no conclusion"});
    out.push_back(gate);
  }
  out.back().inputs_digest = digest;
  out.push_back(verify_corollary_m(lambda, gamma));
  out.back().inputs_digest = digest;
  return out;
}

std::vector<VerificationReport> run_fiberization(const json& config, std::uint64_t seed, double tol) {
  std::vector<VerificationReport> out;
  if (config.contains("periodization")) {
    const auto& p = config["periodization"];
    PeriodizationGrid grid{p["N"].get<std::size_t>(), p["M"].get<std::size_t>(),
                           p.value("weights", std::vector<double>{})};
    VerificationReport r;
    r.name = "periodization";
    r.seed = seed;
    const GOperatorFamily family = periodization_family(grid);
    const FrameBounds b = frame_bounds(family);
    r.add(bound_check("parseval_lower", b.lower, 1.0, 1e-12));
    r.add(bound_check("parseval_upper", b.upper, 1.0, 1e-12));
    const double tau = config.value("scale", 1.0);
    const FrameBounds scaled = frame_bounds(scale_measure(family, tau));
    r.add(bound_check("scaled_lower", scaled.lower, tau * b.lower, 1e-12 * std::max(1.0, tau)));
    r.add(bound_check("scaled_upper", scaled.upper, tau * b.upper, 1e-12 * std::max(1.0, tau)));
    out.push_back(std::move(r));
  }
  if (config.contains("shift_system")) {
    const auto& s = config["shift_system"];
    ShiftSystem system;
    system.n = s["N"].get<std::size_t>();
    system.step = s["p"].get<std::size_t>();
    if (s.contains("extra_shifts")) system.extra_shifts = s["extra_shifts"].get<std::vector<long>>();
    if (s.contains("generators")) {
      for (const auto& g : s["generators"]) system.generators.emplace_back(vector_from_json(g));
    } else {
      auto rng = trial_rng(seed, 2);
      for (std::size_t k = 0; k < s["random_generators"].get<std::size_t>(); ++k)
        system.generators.emplace_back(random_vector(system.n, rng));
    }
    system.validate();

    VerificationReport r;
    r.name = "shift_system";
    r.seed = seed;
    Aggregate identity("fiber_norm_identity");
    Aggregate energy("fiber_energy_conservation");
    const std::size_t signals = config.value("signals", std::size_t{10});
    for (std::size_t t = 0; t < signals; ++t) {
      auto rng = trial_rng(seed, 100 + t);
      const CyclicSignal f(random_vector(system.n, rng));
      identity.add(verify_fiber_norm_identity(system, f, tol / 10.0));
      const double norm2 = f.values().squaredNorm();
      energy.equality(std::abs(fiber_decomposition(system, f).energy() - norm2), 1e-12 * std::max(1.0, norm2));
    }
    r.add(identity.result());
    r.add(energy.result());
    const VerificationReport theorem = verify_fiber_frame_theorem(system, tol / 10.0);
    for (const auto& c : theorem.checks) r.add(c);
    r.note = theorem.note;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

bool RunReport::passed() const {
  for (const auto& s : sections)
    if (!s.passed()) return false;
  return !sections.empty();
}

json RunReport::to_json() const {
  json j;
  j["tool_version"] = tool_version;
  j["config_digest"] = config_digest;
  j["kind"] = gframe::to_string(kind);
  j["seed"] = seed;
  j["passed"] = passed();
  j["elapsed_ms"] = elapsed_ms;
  j["sections"] = json::array();
  for (const auto& s : sections) j["sections"].push_back(gframe::to_json(s));
  return j;
}

std::string RunReport::summary_table() const {
  std::ostringstream os;
  os << "gframe " << tool_version << "  " << gframe::to_string(kind) << "  seed " << seed << "  config " << config_digest
     << "\n";
  os << std::left << std::setw(22) << "section" << std::setw(34) << "check" << std::right << std::setw(13) << "residual"
     << std::setw(13) << "slack" << std::setw(11) << "tol" << "  result\n";
  for (const auto& s : sections) {
    for (const auto& c : s.checks) {
      os << std::left << std::setw(22) << s.name << std::setw(34) << c.name << std::right << std::scientific
         << std::setprecision(3) << std::setw(13) << c.residual << std::setw(13) << c.slack << std::setw(11)
         << c.tolerance << "  " << (c.passed ? "PASS" : "FAIL") << "\n";
      os << std::defaultfloat;
    }
    if (!s.note.empty()) os << "  note: " << s.note << "\n";
  }
  os << "aggregate: " << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

RunReport run_experiment(const json& config, const fs::path& base_dir, const RunOptions& options) {
  const auto issues = validate_config(config, base_dir);
  if (!issues.empty()) throw ConfigError(issues.front().path + ": " + issues.front().message);
  if (options.jobs > 0) omp_set_num_threads(options.jobs);

  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.tool_version = kToolVersion;
  report.config_digest = digest_hex(config.dump());
  report.kind = *parse_experiment_kind(config["kind"].get<std::string>());
  report.seed = config.value("seed", std::uint64_t{0});
  const double tol = options.tol.value_or(config.value("tolerance", 1e-9));

  std::optional<GOperatorFamily> family;
  if (config.contains("family")) family = load_source(config["family"], base_dir, report.seed);

  try {
    switch (report.kind) {
      case ExperimentKind::FrameAnalysis:
        report.sections.push_back(run_frame_analysis(config, *family, report.seed, tol));
        break;
      case ExperimentKind::IdentitySuite:
        report.sections.push_back(run_identity_suite(config, base_dir, *family, report.seed, tol));
        break;
      case ExperimentKind::PerturbationStudy:
        report.sections = run_perturbation_study(config, base_dir, *family, report.seed);
        break;
      case ExperimentKind::FiberizationDemo:
        report.sections = run_fiberization(config, report.seed, tol);
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const FrameError& e) {
    VerificationReport failed;
    failed.name = gframe::to_string(report.kind);
    failed.add({"error", 0.0, 0.0, 0.0, false, e.what()});
    report.sections.push_back(std::move(failed));
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int run_config_file(const fs::path& config_path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  std::ifstream in(config_path);
  if (!in) {
    err << "error: cannot open config " << config_path.string() << "\n";
    return 2;
  }
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    err << "error: " << config_path.string() << ": malformed JSON: " << e.what() << "\n";
    return 2;
  }
  const fs::path base = config_path.has_parent_path() ? config_path.parent_path() : fs::path(".");
  const auto issues = validate_config(config, base);
  if (!issues.empty()) {
    for (const auto& i : issues) err << "error: " << config_path.string() << ": " << (i.path.empty() ? "/" : i.path) << ": " << i.message << "\n";
    return 2;
  }
  try {
    const RunReport report = run_experiment(config, base, options);
    const json outputs = config.value("output", json::object());
    const fs::path stem = config_path.stem();
    const fs::path report_path = base / outputs.value("report", stem.string() + ".report.json");
    const fs::path summary_path = base / outputs.value("summary", stem.string() + ".summary.txt");
    const std::string table = report.summary_table();
    write_atomically(report_path, report.to_json().dump(2) + "\n");
    write_atomically(summary_path, table);
    if (!options.quiet) out << table;
    if (!report.passed()) {
      for (const auto& s : report.sections)
        for (const auto& c : s.checks)
          if (!c.passed) err << "FAILED: " << s.name << "." << c.name << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

std::vector<fs::path> generate_fixtures(ExperimentKind kind, std::uint64_t seed, std::size_t dim, const fs::path& out_dir) {
  if (dim == 0 || dim > 256) throw ConfigError("generate: dim must be in 1..256");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("generate: cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  auto save = [&](const GOperatorFamily& f, const std::string& name) {
    save_family(f, out_dir / name);
    written.push_back(out_dir / name);
  };

  json config;
  config["kind"] = to_string(kind);
  config["seed"] = seed;
  config["output"] = {{"report", "report.json"}, {"summary", "summary.txt"}};

  RandomFamilySpec spec;
  spec.dim = dim;
  spec.points = 4;
  spec.indices = 2;
  spec.max_codim = 2;
  auto rng = trial_rng(seed, 0);

  switch (kind) {
    case ExperimentKind::FrameAnalysis: {
      const GOperatorFamily family = random_family(spec, rng);
      save(family, "family.json");
      save(parsevalize(family), "parseval.json");
      config["family"] = {{"file", "family.json"}};
      config["samples"] = 100;
      break;
    }
    case ExperimentKind::IdentitySuite: {
      const GOperatorFamily family = random_family(spec, rng);
      save(family, "family.json");
      save(parsevalize(family), "parseval.json");
      auto dual_rng = trial_rng(seed, 1);
      save(nullspace_alternate_dual(family, dual_rng), "alternate_dual.json");
      config["family"] = {{"file", "family.json"}};
      config["alternate_dual"] = {{"file", "alternate_dual.json"}};
      config["trials"] = 100;
      config["lambda_grid"] = default_lambda_grid();
      break;
    }
    case ExperimentKind::PerturbationStudy: {
      const GOperatorFamily family = random_family(spec, rng);
      const double root_a = std::sqrt(frame_bounds(family).lower);
      auto noise_rng = trial_rng(seed, 1);
      save(family, "family.json");
      save(scaled_perturbation(family, 0.05 * root_a, noise_rng), "perturbed.json");
      config["family"] = {{"file", "family.json"}};
      config["perturbed"] = {{"file", "perturbed.json"}};
      config["params"] = {{"lambda1", 0.0}, {"lambda2", 0.0}, {"mu", 0.1 * root_a}};
      config["ascent"] = {{"starts", 32}, {"iterations", 500}};
      break;
    }
    case ExperimentKind::FiberizationDemo: {
      const std::size_t n = 4 * dim;
      config["periodization"] = {{"N", n}, {"M", 4}};
      config["scale"] = 3.0;
      json gens = json::array();
      for (int k = 0; k < 2; ++k) gens.push_back(vector_to_json(random_vector(n, rng)));
      config["shift_system"] = {{"N", n}, {"p", 4}, {"generators", gens}, {"extra_shifts", json::array({0, 1})}};
      config["signals"] = 20;
      break;
    }
  }
  const fs::path config_path = out_dir / "config.json";
  write_atomically(config_path, config.dump(2) + "\n");
  written.insert(written.begin(), config_path);
  return written;
}

}  // namespace gframe
