#pragma once

#include "vpdw/expr.hpp"
#include "vpdw/ibp.hpp"
#include "vpdw/rules.hpp"

#include <string>
#include <vector>

namespace vpdw {

struct CheckResult {
	std::string id;
	std::string claim;
	Verdict verdict = Verdict::Fail;
	std::string detail;

	static CheckResult of(std::string id, std::string claim, bool pass,
	                      std::string detail = "")
	{
		return {std::move(id), std::move(claim), pass ? Verdict::Pass : Verdict::Fail,
		        std::move(detail)};
	}
};

// --- reference expressions --------------------------------------------------

// field strength components with free labels mu (lower), nu (lower), al (upper)
Expression fieldStrength();
// -1/4 F.F
Expression lagrangianFsq();
// gauge-fixed Lagrangian with the auxiliary field: F.F, ghost, h-sector terms
Expression lagrangianNew();
// ghost + gauge-fixing sector of the pre-auxiliary-field Lagrangian
Expression lagrangianModGhostSector();
// gauge-fixing fermion: -(ws.f + xi/2 ws.h)
Expression gaugeFixingFermion();
// covariant derivative along the named spacetime label applied to e
Expression covariantDerivative(const Expression &e, const std::string &muLabel,
                               const std::string &auxLabel);
// second-order kernel of the gauge-fixing functional applied to an atom
// named like the ghost or the gauge parameter, free inner label `al`
Expression fpKernelApplied(const std::string &atomName);

// --- identity suites ---------------------------------------------------------

// second variation of every field vanishes after divergence constraints;
// one result per species plus a summary entry
std::vector<CheckResult> checkNilpotency(const RuleSet &rs);

// commutator of two divergence-free directional derivatives closes onto the
// bracket, the bracket is divergence-free, and the commutator of a parameter
// with itself vanishes
std::vector<CheckResult> checkAlgebraClosure();

// [D,D] equals the field strength components; inner divergence of F vanishes;
// the gauge variation of F is covariant
std::vector<CheckResult> checkFieldStrength();

// kernel of the Lorentz gauge-fixing functional: matches the direct variation,
// reduces to the wave operator at vanishing gauge field, and reproduces the
// ghost Lagrangian up to integration by parts
std::vector<CheckResult> checkFpKernel();

// all four divergence conditions on the varied fields
std::vector<CheckResult> checkDivergencePreservation(const RuleSet &rs);

// coincident-point supertrace of the variation's functional derivative;
// every contribution is itemized with the reason it vanishes
struct SupertraceTerm {
	std::string block;
	std::string rendering;
	std::string reason; // transversal | inner-parity | spacetime-parity | zero
	bool vanishes;
};
struct SupertraceReport {
	std::vector<SupertraceTerm> terms;
	bool pass;
};
SupertraceReport jacobianSupertrace(const RuleSet &rs);

// delta(L) reduced by the integration-by-parts normal form; pass = reduces to
// zero. The detail groups surviving monomials by field content.
struct InvarianceResult {
	CheckResult check;
	IbpResult ibp;
	std::vector<std::string> cancelledGroups;
	std::vector<std::string> remainingGroups;
};
InvarianceResult checkActionInvariance(const std::string &id, const Expression &lagrangian,
                                       const RuleSet &rs, int stepLimit = 20000);

} // namespace vpdw
