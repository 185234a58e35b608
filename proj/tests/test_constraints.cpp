#include "vpdw/basis.hpp"
#include "vpdw/calculus.hpp"
#include "vpdw/constraints.hpp"
#include "vpdw/parser.hpp"

#include <doctest.h>

using namespace vpdw;

TEST_CASE("general ansatz reduces to the solved one-parameter family")
{
	auto sol = solveRuleConstraints();
	for (auto &c : sol.checks)
	{
		INFO(c.id, ": ", c.detail);
		CHECK(c.verdict == Verdict::Pass);
	}
	CHECK(sol.nilpotentAfterSubstitution);
	CHECK(sol.matchesSolvedCatalog);
	// the hard divergence conditions: trace components vanish, the
	// gauge-tensor pair is antisymmetric
	bool sawD1 = false, sawAnti = false;
	for (auto &f : sol.forced)
	{
		if (f.find("d1 = 0") != std::string::npos)
			sawD1 = true;
		if (f.find("d2 + d3 = 0") != std::string::npos ||
		    f.find("d3 + d2 = 0") != std::string::npos)
			sawAnti = true;
	}
	CHECK(sawD1);
	CHECK(sawAnti);
	// the trace direction of the ghost tensor acts as zero
	bool sawE1 = false;
	for (auto &f : sol.inert)
		if (f.find("e1") != std::string::npos)
			sawE1 = true;
	CHECK(sawE1);
}

TEST_CASE("the general rules specialize to the fermionic transformation")
{
	// unit tensors: Bt -> eta, Ct -> -eta, Dt -> -(eta eta - eta eta)/1,
	// Et -> (eta eta - eta eta)/2 reproduce the original variation templates
	RuleSet rs = generalBrstRules();
	for (auto &[s, t] : rs.rules)
	{
		t = substituteTensor(t, "Bt", etaBasis2("one"));
		t = substituteTensor(t, "Ct", {{Rational(-1), SymProd("one"), {{0, 1}}}});
		t = substituteTensor(t, "Dt",
		                     {{Rational(-1), SymProd("one"), {{0, 2}, {1, 3}}},
		                      {Rational(1), SymProd("one"), {{0, 3}, {1, 2}}}});
		t = substituteTensor(t, "Et",
		                     {{Rational(-1, 2), SymProd("one"), {{0, 2}, {1, 3}}},
		                      {Rational(1, 2), SymProd("one"), {{0, 3}, {1, 2}}}});
		t = substituteScalar(t, "one", Rational(1), SymProd());
		t = applyDivergenceConstraint(t);
	}
	const RuleSet &brst = brstRules();
	for (auto &[s, t] : brst.rules)
	{
		REQUIRE(rs.rules.count(s));
		CHECK(equal(applyDivergenceConstraint(t), rs.rules.at(s)));
	}
}

TEST_CASE("counterterm enumeration: sector cardinalities")
{
	auto ghost = enumerateOperators("ghost", 4);
	REQUIRE(ghost.terms.size() == 2);
	CHECK(ghost.terms[0].tensorRank == 2);
	CHECK(ghost.terms[1].tensorRank == 4);
	for (auto &t : ghost.terms)
	{
		CHECK(t.massDim == Rational(4));
		CHECK(t.ghostNumber == 0);
	}

	auto nl = enumerateOperators("nl", 4);
	REQUIRE(nl.terms.size() == 3);
	for (auto &t : nl.terms)
		CHECK(t.massDim == Rational(4));

	// dimension-two pure-gauge query: A.A appears before the filters and
	// nothing survives them
	auto gauge = enumerateOperators("gauge", 2);
	CHECK(gauge.terms.empty());
	bool sawAA = false;
	for (auto &p : gauge.preFilter)
		if (p.find("A A") != std::string::npos)
			sawAA = true;
	CHECK(sawAA);
}

TEST_CASE("ansatz reproduces the bare Lagrangian at unit couplings")
{
	Expression L = buildAnsatz();
	L = substituteTensor(L, "et", etaBasis4("e1", "e2", "e3"));
	L = substituteTensor(L, "dt", etaBasis4("d1", "d2", "d3"));
	for (auto &[n, c] : std::map<std::string, Rational>{
	         {"e1", 0}, {"e2", 0}, {"e3", 0}, {"d1", 0}, {"d2", -1}, {"d3", 1},
	         {"Zw", 1}, {"cN", 1}})
		L = substituteScalar(L, n, c, SymProd());
	L = substituteScalar(L, "xiN", Rational(1), SymProd("xi"));
	Expression bare = parse("1/2*xi*h[.al]*h[al] + h[.al]*d[mu](A[.mu,al])"
	                        " - d[.mu](ws[.al])*d[mu](w[al])"
	                        " - d[.mu](ws[.al])*(A[mu,.be]*nab[be](w[al])"
	                        " - w[be]*nab[.be](A[mu,al]))");
	CHECK(equal(applyDivergenceConstraint(L), applyDivergenceConstraint(bare)));
}

TEST_CASE("counterterm constraints solve to the bare pattern")
{
	auto sol = solveCountertermConstraints();
	for (auto &c : sol.checks)
	{
		INFO(c.id, " -> ", c.detail);
		CHECK(c.verdict == Verdict::Pass);
	}
	CHECK(sol.residualZero);
}

TEST_CASE("solved counterterms match the bare Lagrangian")
{
	auto sol = solveCountertermConstraints();
	auto match = matchToBare(sol);
	CHECK(match.unmatchedSolved == 0);
	CHECK(match.unmatchedBare == 0);
	for (auto &c : match.checks)
	{
		INFO(c.id, ": ", c.detail);
		CHECK(c.verdict == Verdict::Pass);
	}
	bool sawGhost = false;
	for (auto &r : match.rows)
		if (r.bareTerm == "ghost kinetic" && r.constant == "Zw")
			sawGhost = true;
	CHECK(sawGhost);
}
