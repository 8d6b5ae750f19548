#include "gframe/report.hpp"

#include <cstdio>

namespace gframe {

const char* to_string(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::ParsevalIdentity: return "ParsevalIdentity";
    case IdentityKind::CanonicalDualInequality: return "CanonicalDualInequality";
    case IdentityKind::AlternateDualInequality: return "AlternateDualInequality";
    case IdentityKind::GeneralComplexIdentity: return "GeneralComplexIdentity";
    case IdentityKind::OperatorLemma: return "OperatorLemma";
    case IdentityKind::FiberNormIdentity: return "FiberNormIdentity";
  }
  return "Unknown";
}

IdentityCheck IdentityCheck::equality(IdentityKind kind, Complex lhs, Complex rhs, double tol, Witness witness) {
  IdentityCheck c;
  c.kind = kind;
  c.lhs = lhs;
  c.rhs = rhs;
  c.tolerance = tol;
  c.witness = std::move(witness);
  c.passed = std::abs(lhs - rhs) <= tol;
  return c;
}

IdentityCheck IdentityCheck::lower_bound(IdentityKind kind, double value, double bound, double tol, Witness witness) {
  IdentityCheck c;
  c.kind = kind;
  c.inequality = true;
  c.lhs = value;
  c.rhs = bound;
  c.slack = value - bound;
  c.tolerance = tol;
  c.witness = std::move(witness);
  c.passed = c.slack >= -tol;
  return c;
}

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void VerificationReport::add(const std::string& check_name, const IdentityCheck& check) {
  CheckResult r;
  r.name = check_name;
  r.residual = check.inequality ? 0.0 : check.residual();
  r.slack = check.slack;
  r.tolerance = check.tolerance;
  r.passed = check.passed;
  r.note = to_string(check.kind);
  if (check.witness.lambda) r.note += " lambda=" + std::to_string(*check.witness.lambda);
  checks.push_back(std::move(r));
}

const CheckResult* VerificationReport::find(const std::string& check_name) const {
  for (const auto& c : checks)
    if (c.name == check_name) return &c;
  return nullptr;
}

namespace {

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

nlohmann::json to_json(const IdentityCheck& check) {
  nlohmann::json j;
  j["kind"] = to_string(check.kind);
  j["inequality"] = check.inequality;
  j["lhs"] = complex_json(check.lhs);
  j["rhs"] = complex_json(check.rhs);
  j["residual"] = check.residual();
  j["slack"] = check.slack;
  j["tolerance"] = check.tolerance;
  j["passed"] = check.passed;
  if (check.witness.lambda) j["lambda"] = *check.witness.lambda;
  return j;
}

nlohmann::json to_json(const CheckResult& check) {
  return {{"name", check.name},   {"residual", check.residual}, {"slack", check.slack},
          {"tolerance", check.tolerance}, {"passed", check.passed}, {"note", check.note}};
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["passed"] = report.passed();
  j["inputs_digest"] = report.inputs_digest;
  if (report.seed) j["seed"] = *report.seed;
  if (!report.note.empty()) j["note"] = report.note;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) j["checks"].push_back(to_json(c));
  return j;
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gframe
