#include "vpdw/ibp.hpp"

#include "vpdw/calculus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace vpdw {

namespace {

// derivative-blind pivot key: moving derivatives around never changes it
std::string pivotKey(const Atom &a)
{
	std::ostringstream os;
	os << speciesInfo(a.species).pivotRank << '|' << a.name << '|';
	for (auto &ix : a.idx)
	{
		os << (ix.kind == IndexKind::Spacetime ? 's' : 'i');
		if (ix.isDummy())
			os << '?';
		else
			os << (ix.var == Variance::Upper ? '^' : '_') << ix.name;
		os << ';';
	}
	return os.str();
}

struct StripPlan {
	int atom = -1;
	int list = 0; // 1 spacetime, 2 inner
	int pos = -1;
	bool directed = false;
};

bool sinksDivergence(Species s)
{
	return speciesNeedsDivergenceConstraint(s) || s == Species::ResidualParam;
}

// Candidate integration-by-parts moves for one monomial, in order of
// preference. Directed moves take an inner derivative whose contraction
// partner is the own index of a divergence-constrained atom elsewhere; they
// telescope complete Leibniz families into that sink. The fallback cleans the
// least factor group.
std::vector<StripPlan> stripPlans(const Monomial &m)
{
	std::vector<StripPlan> plans;
	for (int i = 0; i < static_cast<int>(m.atoms.size()); ++i)
	{
		const Atom &x = m.atoms[i];
		for (int pi = 0; pi < static_cast<int>(x.din.size()); ++pi)
		{
			const Index &d = x.din[pi];
			if (!d.isDummy())
				continue;
			for (int j = 0; j < static_cast<int>(m.atoms.size()); ++j)
			{
				if (j == i || !sinksDivergence(m.atoms[j].species))
					continue;
				const auto &info = speciesInfo(m.atoms[j].species);
				bool hit = false;
				for (int k = info.nSpacetimeIdx; k < static_cast<int>(m.atoms[j].idx.size());
				     ++k)
					if (m.atoms[j].idx[k].isDummy() && m.atoms[j].idx[k].dummy == d.dummy)
						hit = true;
				if (hit)
				{
					plans.push_back({i, 2, pi, true});
					break;
				}
			}
		}
	}
	if (!m.atoms.empty())
	{
		std::string least;
		for (const auto &a : m.atoms)
		{
			std::string k = pivotKey(a);
			if (least.empty() || k < least)
				least = k;
		}
		for (int i = 0; i < static_cast<int>(m.atoms.size()); ++i)
			if (pivotKey(m.atoms[i]) == least &&
			    (!m.atoms[i].dst.empty() || !m.atoms[i].din.empty()))
			{
				if (!m.atoms[i].dst.empty())
					plans.push_back({i, 1, static_cast<int>(m.atoms[i].dst.size()) - 1, false});
				else
					plans.push_back({i, 2, static_cast<int>(m.atoms[i].din.size()) - 1, false});
				break;
			}
	}
	return plans;
}

// Leibniz attach without canonicalization; atom `exclude` is skipped
void rawDerive(std::vector<Monomial> &out, const Monomial &m, const Index &d, int exclude)
{
	bool inner = d.kind == IndexKind::Inner;
	for (size_t i = 0; i < m.atoms.size(); ++i)
	{
		if (static_cast<int>(i) == exclude)
			continue;
		const auto &info = speciesInfo(m.atoms[i].species);
		if (inner ? info.constInner : info.constSpacetime)
			continue;
		Monomial t = m;
		if (inner && t.atoms[i].species == Species::ResidualParam)
		{
			Atom w;
			w.species = Species::InnerRotation;
			w.name = speciesInfo(Species::InnerRotation).printName;
			w.idx = {t.atoms[i].idx[0], d};
			w.dst = t.atoms[i].dst;
			t.atoms[i] = std::move(w);
		}
		else if (inner)
			t.atoms[i].din.push_back(d);
		else
			t.atoms[i].dst.push_back(d);
		out.push_back(std::move(t));
	}
}

std::string skeletonKey(const Monomial &m)
{
	Monomial bare = m;
	bare.coeff = Rational(1);
	bare.sym = SymProd();
	std::string key;
	auto cm = canonicalizeMonomial(bare, &key);
	return cm ? key + "|" + m.sym.str() : std::string();
}

struct StripOutcome {
	bool ok = false;
	Expression result;
	WitnessTerm wit;
};

// execute one integration by parts on work.terms[mi];
// k m = D(arg) + g m + rest  =>  k m = s (D(arg') + rest), s = k/(k-g)
StripOutcome tryStrip(const Expression &work, size_t mi, const StripPlan &plan,
                      int &wvCounter)
{
	StripOutcome out;
	const Monomial &m = work.terms[mi];

	Atom pivot = m.atoms[plan.atom];
	Index d;
	if (plan.list == 1)
	{
		d = pivot.dst[plan.pos];
		pivot.dst.erase(pivot.dst.begin() + plan.pos);
	}
	else
	{
		d = pivot.din[plan.pos];
		pivot.din.erase(pivot.din.begin() + plan.pos);
	}
	Monomial stripped = m;
	stripped.atoms[plan.atom] = pivot;

	Monomial negated = stripped;
	negated.coeff = -negated.coeff;
	std::vector<Monomial> rawPieces;
	rawDerive(rawPieces, negated, d, plan.atom);
	Expression piecesE;
	piecesE.terms = std::move(rawPieces);
	piecesE = applyDivergenceConstraint(piecesE);

	std::string mKey = skeletonKey(m);
	Rational k = m.coeff;
	Rational g(0);
	Expression rest;
	for (const auto &t : piecesE.terms)
	{
		if (skeletonKey(t) == mKey)
			g += t.coeff;
		else
			rest.terms.push_back(t);
	}
	if (g == k)
		return out; // degenerate: this move carries no information
	Rational s = k / (k - g);

	// witness argument: an index that was a contraction is exposed as a
	// named label shared between the derivative and the argument
	Index dW = d;
	Monomial wArg = stripped;
	if (d.isDummy())
	{
		std::string label = "wv" + std::to_string(wvCounter++);
		dW = Index::ext(d.kind, d.var, label);
		for (auto &a : wArg.atoms)
			for (auto *lst : {&a.idx, &a.dst, &a.din})
				for (auto &ix : *lst)
					if (ix.isDummy() && ix.dummy == d.dummy)
					{
						ix.name = label;
						ix.dummy = 0;
					}
	}
	wArg.coeff = wArg.coeff * s;
	Expression argE;
	argE.terms.push_back(wArg);
	out.wit = {dW, canonicalize(argE)};

	Expression remaining;
	for (size_t i = 0; i < work.terms.size(); ++i)
		if (i != mi)
			remaining.terms.push_back(work.terms[i]);
	for (Monomial t : rest.terms)
	{
		t.coeff = t.coeff * s;
		remaining.terms.push_back(std::move(t));
	}
	out.result = applyDivergenceConstraint(remaining);
	out.ok = true;
	return out;
}

} // namespace

Expression ibpNormalForm(const Expression &e, int stepLimit,
                         std::vector<WitnessTerm> *witness, bool *hitLimit)
{
	if (hitLimit)
		*hitLimit = false;
	Expression work = applyDivergenceConstraint(e);
	int steps = 0;
	int wvCounter = 0;
	std::set<std::string> settled;       // treated as normal from here on
	std::map<std::string, int> stripped; // cycle guard

	while (true)
	{
		size_t mi = work.terms.size();
		std::vector<StripPlan> plans;
		for (size_t i = 0; i < work.terms.size(); ++i)
		{
			if (settled.count(skeletonKey(work.terms[i])))
				continue;
			plans = stripPlans(work.terms[i]);
			if (!plans.empty())
			{
				mi = i;
				break;
			}
			settled.insert(skeletonKey(work.terms[i]));
		}
		if (mi == work.terms.size())
			return work;
		if (++steps > stepLimit)
		{
			if (hitLimit)
				*hitLimit = true;
			return work;
		}
		std::string key = skeletonKey(work.terms[mi]);
		if (++stripped[key] > 25)
		{
			// likely a reshuffling cycle; freeze and report incompleteness
			settled.insert(key);
			if (hitLimit)
				*hitLimit = true;
			continue;
		}

		bool done = false;
		for (const auto &plan : plans)
		{
			StripOutcome o = tryStrip(work, mi, plan, wvCounter);
			if (!o.ok)
				continue;
			// a directed move must strictly shrink the expression, otherwise
			// it only reshuffles derivatives between hosts
			if (plan.directed && o.result.terms.size() >= work.terms.size())
				continue;
			work = std::move(o.result);
			if (witness)
				witness->push_back(std::move(o.wit));
			done = true;
			break;
		}
		if (!done)
			settled.insert(key);
	}
}

IbpResult ibpEquivalent(const Expression &e1, const Expression &e2, int stepLimit)
{
	IbpResult r;
	bool limit = false;
	r.normalForm = ibpNormalForm(e1 - e2, stepLimit, &r.witness, &limit);
	if (r.normalForm.isZero())
		r.verdict = Verdict::Pass;
	else if (limit)
		r.verdict = Verdict::Inconclusive;
	else
		r.verdict = Verdict::Fail;
	if (r.verdict != Verdict::Pass)
		r.witness.clear();
	return r;
}

} // namespace vpdw
