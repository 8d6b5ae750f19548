#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gframe/model.hpp"

namespace gframe {

enum class IdentityKind {
  ParsevalIdentity,
  CanonicalDualInequality,
  AlternateDualInequality,
  GeneralComplexIdentity,
  OperatorLemma,
  FiberNormIdentity,
};

const char* to_string(IdentityKind kind);

/// Where an identity was evaluated.
struct Witness {
  CVector f;
  std::optional<SubsetMask> mask;
  std::optional<double> lambda;
};

/// One evaluated identity (|lhs - rhs| <= tol) or inequality (slack >= -tol).
struct IdentityCheck {
  IdentityKind kind = IdentityKind::ParsevalIdentity;
  bool inequality = false;
  Complex lhs{};
  Complex rhs{};
  double slack = 0.0;
  double tolerance = 0.0;
  Witness witness;
  bool passed = false;

  double residual() const { return std::abs(lhs - rhs); }

  static IdentityCheck equality(IdentityKind kind, Complex lhs, Complex rhs, double tol,
                                Witness witness = {});
  static IdentityCheck lower_bound(IdentityKind kind, double value, double bound, double tol,
                                   Witness witness = {});
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

/// Named list of checks; passed() is true iff every check passed.
struct VerificationReport {
  std::string name;
  std::vector<CheckResult> checks;
  std::optional<std::uint64_t> seed;
  std::string inputs_digest;
  std::string note;

  bool passed() const;
  void add(CheckResult check) { checks.push_back(std::move(check)); }
  void add(const std::string& name, const IdentityCheck& check);
  const CheckResult* find(const std::string& check_name) const;
};

nlohmann::json to_json(const IdentityCheck& check);
nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const VerificationReport& report);

/// FNV-1a 64-bit digest, hex encoded.
std::string digest_hex(const std::string& bytes);

}  // namespace gframe
