#pragma once

#include "vpdw/calculus.hpp"
#include "vpdw/checks.hpp"
#include "vpdw/rules.hpp"
#include "vpdw/symbols.hpp"

#include <string>
#include <vector>

namespace vpdw {

// Expansion of the unknown constant tensors over metric pairings. Rank two
// has the single component eta; rank four has the three pairings.
std::vector<EtaPairing> etaBasis2(const std::string &symbol);
std::vector<EtaPairing> etaBasis4(const std::string &s1, const std::string &s2,
                                  const std::string &s3);

// Linear equations over the named scalars, used for the divergence stage and
// the counterterm solve.
struct LinearSystem {
	std::vector<SymPoly> equations;
	std::vector<std::string> renderings;
};

// Outcome of reducing the general-coefficient transformation ansatz:
// divergence conditions, inert directions, effective scalar form, and the
// nilpotency conditions on the surviving scalars.
struct RuleConstraintSolution {
	std::vector<std::string> forced;       // hard component conditions
	std::vector<std::string> inert;        // directions acting as zero
	std::vector<std::string> effectiveForm; // surviving one-scalar-per-term form
	std::vector<std::string> nilpotencyEquations;
	std::vector<std::string> solvedConditions; // scalar identities closing the algebra
	bool nilpotentAfterSubstitution = false;
	bool matchesSolvedCatalog = false; // equals the reduced rule family
	std::vector<CheckResult> checks;
};

RuleConstraintSolution solveRuleConstraints();

} // namespace vpdw
