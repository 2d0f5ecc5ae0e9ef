#pragma once

// Bundled verification suites and their deterministic reports.

#include <cstdint>
#include <string>
#include <vector>

#include "maxvar/budget.hpp"
#include "maxvar/unipotent.hpp"

namespace maxvar {

enum class CheckStatus { Pass, Fail, Skipped };

std::string status_name(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  Json measured;
  Json expected;
  // "published" (a value printed in the source literature), "trivial" or "derived" (independent oracle).
  std::string provenance = "derived";
  std::string note;
  double wall_time = 0.0;  // serialized only on request
};

struct SuiteEntry {
  GroupSpec spec;
  std::uint32_t kmax = 1;
};

struct SuiteConfig {
  std::string name = "custom";
  // Any of: zeta, maximality, betti-identity, norm-certify, rho-irreducibility, trace-sums, gauss-sums, pairing.
  std::vector<std::string> checks;
  std::vector<SuiteEntry> matrix;
  // For gauss-sums: q = p^f values and the largest k.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> gauss_fields;
  std::uint32_t gauss_kmax = 3;
  Budget budget;
  unsigned threads = 1;

  void validate() const;
};

const std::vector<std::string>& all_checks();
// The desk-scale matrix with per-spec k ceilings.
SuiteConfig default_suite();

struct SuiteReport {
  std::string name;
  std::vector<CheckResult> checks;

  std::uint64_t count(CheckStatus s) const;
  // 0 when every check that ran passed, 1 on any failure, 3 when everything was skipped.
  int exit_code() const;
  Json to_json(bool with_timings = false) const;
  std::string to_csv(bool with_timings = false) const;
};

SuiteReport run_suite(const SuiteConfig& config);

}  // namespace maxvar
