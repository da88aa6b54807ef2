#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "endcharge/end_charge.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/transport.hpp"

namespace endcharge {

using FluxOracle = std::function<FluxField(const MeasureState&, const EndCharge&)>;

struct VerifyConfig {
  std::uint64_t seed = 7;
  std::size_t cases = 100;
  std::size_t max_depth = 6;
  std::size_t max_nodes = 64;
  // Independent solver for the flux a section must carry; forced_flux by default.
  FluxOracle flux_oracle;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double seconds = 0;
  std::string note;  // first failure, or extra detail on success
  bool passed = false;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  std::size_t infeasible_on_valid = 0;

  bool all_passed() const;
  std::string summary() const;  // one line per criterion
};

// Runs criteria 1..9 in order. Cases counts are lower bounds per criterion.
VerifyReport run_verify(const VerifyConfig& config);

// Individual suites; each bumps infeasible when InfeasibleTransfer escapes
// on valid input.
CriterionResult verify_section_roundtrip(const VerifyConfig& config, std::size_t& infeasible);
CriterionResult verify_homomorphism(const VerifyConfig& config, std::size_t& infeasible);
CriterionResult verify_j_algebra(const VerifyConfig& config, std::size_t& infeasible);
CriterionResult verify_flux_uniqueness(const VerifyConfig& config, std::size_t& infeasible);
CriterionResult verify_diagram(const VerifyConfig& config, std::size_t& infeasible);
CriterionResult verify_factorization(const VerifyConfig& config, std::size_t& infeasible);
CriterionResult verify_oracle(const VerifyConfig& config, std::size_t& infeasible);
// Criterion 8: the count gathered so far must be zero and the doctored
// cases must all raise InfeasibleTransfer.
CriterionResult verify_feasibility_sentinel(std::size_t infeasible);
CriterionResult verify_truncation(const VerifyConfig& config, std::size_t& infeasible);

}  // namespace endcharge
