#pragma once

#include "vpdw/expr.hpp"

#include <vector>

namespace vpdw {

enum class Verdict { Pass, Fail, Inconclusive };

inline const char *verdictName(Verdict v)
{
	switch (v)
	{
	case Verdict::Pass:
		return "pass";
	case Verdict::Fail:
		return "fail";
	default:
		return "inconclusive";
	}
}

// One total-derivative term of a witness: D_idx(argument).
struct WitnessTerm {
	Index d;
	Expression arg;
};

struct IbpResult {
	Verdict verdict = Verdict::Fail;
	Expression normalForm; // of the difference, after reduction
	std::vector<WitnessTerm> witness;
	int steps = 0;
};

// Normal form under integration by parts: repeatedly move derivatives off a
// canonically chosen pivot factor (least factor in a derivative-blind
// ordering) until every monomial's pivot is derivative-free. Divergence
// constraints are applied throughout. Total-derivative terms shed along the
// way are recorded as the witness.
Expression ibpNormalForm(const Expression &e, int stepLimit,
                         std::vector<WitnessTerm> *witness, bool *hitLimit);

// True iff e1 - e2 reduces to zero in the normal form. A nonzero fixed point
// is a Fail; exceeding the step budget is Inconclusive (distinct from Fail).
IbpResult ibpEquivalent(const Expression &e1, const Expression &e2, int stepLimit = 4000);

} // namespace vpdw
