#pragma once

#include <map>
#include <string>
#include <vector>

#include "fgc/json_io.hpp"

namespace fgc {

/* Shared knobs for the verification suites and the CLI. N is the series
   truncation, Q the q-expansion precision (Q >= N/2 + 2 is enforced for
   suites that realize q-expansions), primes the odd primes >= 5 used for
   congruence work, gamma an optional per-prime override of the topological
   generator (validated modulo p and p^2). cache_dir overrides the
   FGC_CACHE_DIR environment variable; empty means "use the environment". */
struct RunConfig {
  int N = 20;
  int Q = 40;
  std::vector<long> primes{5, 7, 11, 13};
  std::map<long, long> gamma;
  std::string cache_dir;
};

/* Configured generator of (Z/p^2)^x: the override when present (usage error
   if it fails the generator test), otherwise the smallest generator. */
long gamma_for(const RunConfig& cfg, long p);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string witness;  // failure detail, or a short informational note
  double seconds = 0;   // wall time; kept out of serialized reports
};

struct VerifyReport {
  std::string suite;
  bool pass = false;  // conjunction of the checks
  std::vector<CheckResult> checks;
};

/* The available suite names, in canonical order. */
const std::vector<std::string>& verify_suite_names();

/* Run one named suite. Every check in the suite runs even after a failure;
   exceptions inside a check are converted into a failed check. Unknown
   suite names and invalid configurations are usage errors. */
VerifyReport verify_suite(const std::string& name, const RunConfig& cfg);

/* Serialized form of a report. Runtimes are omitted so identical inputs
   produce byte-identical artifacts. */
Json verify_report_json(const VerifyReport& rep);

}  // namespace fgc
