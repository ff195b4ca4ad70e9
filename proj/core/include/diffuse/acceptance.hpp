#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace diffuse {

// Outcome of one end-to-end acceptance criterion. `measured` is compared with
// `limit` in the direction stated by `relation`.
struct CriterionResult {
  std::string id;
  std::string description;
  bool pass = false;
  double measured = 0.0;
  std::string relation;
  double limit = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240917;
};

// Windows checked by the averaged-tracking criterion are sampled from the
// traces produced by the discrete and delayed criteria, so those run first.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

std::string format_result(const CriterionResult& r);

}  // namespace diffuse
