#pragma once

#include <string>
#include <vector>

#include "setopt/problem.hpp"

namespace setopt {

/// Identifiers of the 22 benchmark instances, in table order.
const std::vector<std::string>& problem_ids();

/**
 * Builds a benchmark instance by id (family + dimensions, e.g. "zdt1_n10_m2").
 * Throws UnknownProblemError for ids not in problem_ids() (aliases aside).
 *
 * The perturbation pairs (phi_i, psi_i) enumerate the stated 10 x 10 grid
 * phi-major: zero-based index i = 10 * j + l.
 */
SetValuedProblem registry(const std::string& id);

}  // namespace setopt
