#include "vpdw/parser.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace vpdw;
using vpdw::testing::RandomExprGen;

TEST_CASE("parse basics")
{
	auto e = parse("A[mu,al]");
	REQUIRE(e.terms.size() == 1);
	CHECK(e.terms[0].atoms.size() == 1);
	CHECK(e.terms[0].atoms[0].species == Species::GaugeA);

	CHECK(parse("1/2 - 1/2").isZero());
	CHECK(parse("Z*Z^-1").terms.size() == 1);
	CHECK(parse("Z*Z^-1").terms[0].sym.isOne());

	auto two = parse("d[.mu](A[.nu,al]) - d[.nu](A[.mu,al])");
	CHECK(two.terms.size() == 2);

	CHECK_THROWS_AS(parse("A[mu]"), ParseError);    // arity
	CHECK_THROWS_AS(parse("w[al"), ParseError);     // syntax
	CHECK_THROWS_AS(parse("q[al] +"), ParseError);  // trailing operator
	CHECK_THROWS_AS(parse("*w[al]"), ParseError);
}

TEST_CASE("derivatives in the grammar Leibniz-expand")
{
	auto lhs = parse("nab[.ga](w[al]*w[be])");
	auto rhs = parse("nab[.ga](w[al])*w[be] + w[al]*nab[.ga](w[be])");
	CHECK(equal(lhs, rhs));
	// constants drop out
	CHECK(parse("d[.mu](theta)").isZero());
	CHECK(parse("nab[.ga](T[al,be])").isZero());
	CHECK(parse("d[.mu](3/4)").isZero());
}

TEST_CASE("print/parse round trip on canonical forms (randomized)")
{
	RandomExprGen gen(777);
	for (int iter = 0; iter < 400; ++iter)
	{
		Expression e;
		int nt = gen.uniform(1, 3);
		Monomial first = gen.monomial(3);
		e.terms.push_back(first);
		// extra terms share the external structure: reuse the same monomial
		// with tweaked coefficients and derivative placement
		for (int t = 1; t < nt; ++t)
		{
			Monomial m = first;
			m.coeff = Rational(gen.uniform(1, 7), gen.uniform(1, 4));
			e.terms.push_back(m);
		}
		Expression c;
		try
		{
			c = canonicalize(e);
		}
		catch (const ExprError &)
		{
			continue; // generator may create inconsistent externals; skip
		}
		if (c.isZero())
			continue;
		auto text = print(c);
		auto back = parse(text);
		CHECK(equal(back, c));
	}
}

TEST_CASE("round trip of handwritten forms")
{
	for (const char *s : {
	         "A[mu,al]",
	         "w[al]*ws[.al]",
	         "-1/4*Z^2*d[.mu](A[.nu,al])*d[mu](A[nu,.al])",
	         "h[.al]*d[mu](A[.mu,al]) + xi*h[.al]*h[al]",
	         "theta*w[be]*nab[.be](w[al])",
	         "nab[.be](A[.mu,ga])*T[al,be,.ga,de]",
	     })
	{
		auto e = parse(s);
		CHECK(equal(parse(print(e)), e));
	}
}
