#pragma once

#include <string>
#include <vector>

#include "bvloc/catalog.hpp"

namespace bvloc {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;  // worst sampled residual where meaningful
  std::string detail;
};

struct VerifyOptions {
  std::string filter;       // substring of check names to run; empty = all
  bool skew_fault = false;  // perturb the metric off-diagonally before running
};

// Runs the named consistency checks over the catalog.  Output is a pure
// function of the options: no clocks, no addresses, no thread-count
// dependence.
std::vector<VerifyCheck> run_verify(const VerifyOptions& opt);

bool all_pass(const std::vector<VerifyCheck>& checks);
std::string verify_lines(const std::vector<VerifyCheck>& checks);
std::string verify_json(const std::vector<VerifyCheck>& checks);

}  // namespace bvloc
