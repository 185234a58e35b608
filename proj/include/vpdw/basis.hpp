#pragma once

#include "vpdw/checks.hpp"
#include "vpdw/expr.hpp"

#include <string>
#include <vector>

namespace vpdw {

// A candidate local operator: fields and derivatives with inner indices tied
// together by a constant tensor (eta for rank two, a general rank-four tensor
// otherwise). Shapes are counted modulo integration by parts.
struct OperatorTerm {
	std::string rendering;
	Expression shape;     // with the unknown tensor atom when tensorRank == 4
	int tensorRank = 2;
	Rational massDim;
	int ghostNumber = 0;
};

struct EnumerationResult {
	std::vector<OperatorTerm> terms;
	std::vector<std::string> preFilter; // candidates before the symmetry filters
};

// Exhaustive enumeration of the sector's operators of dimension <= maxDim
// under: ghost-number zero, antighost-translation safety (antighosts carry a
// spacetime derivative), spacetime scalarity, even inner pairing with minimal
// inner-derivative dressing, deduplication modulo integration by parts.
// Sectors: "ghost" (one ghost + one antighost), "nl" (auxiliary-field terms),
// "gauge" (gauge fields only; derivative-free candidates are rejected).
EnumerationResult enumerateOperators(const std::string &sector, int maxDim);

// The general counterterm ansatz: auxiliary-field and ghost sectors with
// unknown coefficients xiN, cN, Zw and unknown rank-four tensors et, dt. The
// gauge-matter remainder is a separate gauge-invariance obligation.
Expression buildAnsatz();

struct CountertermSolution {
	std::vector<std::string> equations;
	std::vector<std::string> solved;            // rendering, e.g. "cN = N^-1*Z^-1*Zw"
	std::map<std::string, SymPoly> values;      // solved unknowns
	bool residualZero = false;                  // variation vanishes after substitution
	std::vector<CheckResult> checks;
};

// Impose invariance of the ansatz under the solved one-parameter rules and
// solve the linear system for the unknown coefficients.
CountertermSolution solveCountertermConstraints();

struct BareMatchRow {
	std::string bareTerm;
	std::string constant;     // multiplicative renormalization per term
	bool rescaledInner;       // the inner derivative appears as nab/N
	bool shapeLevel;          // matched by shape only (matter sector)
};

struct BareMatch {
	std::vector<BareMatchRow> rows;
	int unmatchedSolved = 0;
	int unmatchedBare = 0;
	std::vector<CheckResult> checks;
};

// One-to-one pairing of the solved counterterm Lagrangian against the bare
// gauge-fixed Lagrangian with rescaled inner derivatives.
BareMatch matchToBare(const CountertermSolution &sol);

} // namespace vpdw
