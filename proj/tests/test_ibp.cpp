#include "vpdw/ibp.hpp"

#include "vpdw/calculus.hpp"
#include "vpdw/parser.hpp"

#include <doctest.h>

using namespace vpdw;

namespace {

// verify the recorded witness: e == sum of total derivatives + normal form,
// modulo divergence-constraint deletions
void checkWitness(const Expression &e, const IbpResult &r)
{
	Expression rebuilt = r.normalForm;
	for (const auto &w : r.witness)
		rebuilt = rebuilt + derive(w.arg, w.d);
	CHECK(applyDivergenceConstraint(e - rebuilt).isZero());
}

} // namespace

TEST_CASE("single integration by parts")
{
	auto r = ibpEquivalent(parse("d[.mu](h[.al])*w[al]"), parse("-h[.al]*d[.mu](w[al])"));
	CHECK(r.verdict == Verdict::Pass);
	CHECK(!r.witness.empty());
}

TEST_CASE("identity is equivalent to itself")
{
	auto e = parse("A[.mu,be]*nab[.be](A[.nu,al])");
	CHECK(ibpEquivalent(e, e).verdict == Verdict::Pass);
}

TEST_CASE("pure total derivatives vanish")
{
	auto e = derive(parse("h[.al]*w[al]*ws[.be]*w[be]"),
	                Index::ext(IndexKind::Spacetime, Variance::Lower, "mu"));
	std::vector<WitnessTerm> wit;
	bool limit = false;
	auto nf = ibpNormalForm(e, 2000, &wit, &limit);
	CHECK(!limit);
	CHECK(nf.isZero());

	IbpResult r = ibpEquivalent(e, Expression{});
	CHECK(r.verdict == Verdict::Pass);
	checkWitness(e, r);
}

TEST_CASE("double derivative merges after reduction")
{
	// box(ws).w and ws.box(w) are equivalent
	auto a = parse("d[mu](d[.mu](ws[.al]))*w[al]");
	auto b = parse("ws[.al]*d[mu](d[.mu](w[al]))");
	auto r = ibpEquivalent(a, b);
	CHECK(r.verdict == Verdict::Pass);
	checkWitness(a - b, r);
}

TEST_CASE("inner derivative moved onto a divergence-free parameter dies")
{
	// E^be nab_be (h.h) ~ -(nab.E) h.h = 0
	auto e = parse("E[be]*nab[.be](h[.al]*h[al])");
	auto r = ibpEquivalent(e, Expression{});
	CHECK(r.verdict == Verdict::Pass);
}

TEST_CASE("inequivalent expressions fail, not inconclusive")
{
	auto r = ibpEquivalent(parse("h[.al]*h[al]"), parse("2*h[.al]*h[al]"));
	CHECK(r.verdict == Verdict::Fail);
	CHECK(!r.normalForm.isZero());
}

TEST_CASE("step budget reports inconclusive")
{
	auto e = parse("E[be]*nab[.be](h[.al]*h[al])");
	auto r = ibpEquivalent(e, Expression{}, 0);
	CHECK(r.verdict == Verdict::Inconclusive);
	// with a budget the same reduction goes through
	CHECK(ibpEquivalent(e, Expression{}, 100).verdict == Verdict::Pass);
}
