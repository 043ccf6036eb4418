#pragma once

// Named property checks over the shared fixtures: each check exercises one
// contract of the library (dual-route daseinisation, order sandwiches,
// naturality, the k-construction, covariance, ...) with seeded randomness
// and reports pass/fail plus the worst numeric deviation seen. Tolerances
// are pinned inside the check bodies. The acceptance binary and the CLI
// `check` subcommand both run these by name.

#include <cstdint>
#include <string>
#include <vector>

#include "toposqt/io.hpp"

namespace toposqt::checks {

// All registered names, in execution order.
std::vector<std::string> all_check_names();

// Runs one check (Error on unknown name).
CheckResult run_check(const std::string& name, std::uint64_t seed,
                      const TolerancePolicy& policy = {});

std::vector<CheckResult> run_checks(const std::vector<std::string>& names, std::uint64_t seed,
                                    const TolerancePolicy& policy = {});

std::vector<CheckResult> run_all(std::uint64_t seed, const TolerancePolicy& policy = {});

}  // namespace toposqt::checks
