#pragma once

#include "vpdw/expr.hpp"

#include <map>
#include <string>

namespace vpdw {

// A set of first-order variation templates, one per field species. Templates
// are full delta expressions (parameter atom included) with the target atom's
// own indices as placeholders @0, @1, ...
struct RuleSet {
	std::string name;
	std::string paramName;
	Species paramSpecies;
	std::map<Species, Expression> rules;

	bool hasRule(Species s) const { return rules.count(s) != 0; }
};

// gauge transformation with divergence-free parameter E
const RuleSet &gaugeRules();
// gauge transformation restricted to the residual Minkowski-gauge parameters
// (inner translations and rotations, linear in the inner coordinate)
const RuleSet &gaugeResidualRules();
// nilpotent fermionic transformation of the gauge-fixed action
const RuleSet &brstRules();
// general-coefficient ansatz with unknown constant tensors Bt, Ct, Dt, Et
const RuleSet &generalBrstRules();
// solved one-parameter family with renormalization scalars Z, N
const RuleSet &reducedBrstRules();

// same rules driven by a differently named parameter atom (for second,
// independent variations)
RuleSet withParameterName(const RuleSet &rs, const std::string &newParam);

// First-order variation: atom-wise template substitution extended as an even
// derivation (the parameter rides inside the template). Parameter atoms and
// constant tensors are inert; a field species without a rule is an error.
Expression vary(const Expression &e, const RuleSet &rs);

} // namespace vpdw
