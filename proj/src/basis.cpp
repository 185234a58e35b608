#include "vpdw/basis.hpp"

#include "vpdw/calculus.hpp"
#include "vpdw/constraints.hpp"
#include "vpdw/ibp.hpp"
#include "vpdw/parser.hpp"
#include "vpdw/rules.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace vpdw {

namespace {

struct Candidate {
	std::vector<Species> fields; // lead atoms first
	std::vector<int> derivs;     // spacetime derivatives per atom
	int nA = 0;
	int nD = 0;
};

// all ways to distribute n derivatives over k atoms
void distributions(int n, int k, std::vector<int> &cur, std::vector<std::vector<int>> &out)
{
	if (static_cast<int>(cur.size()) == k)
	{
		if (n == 0)
			out.push_back(cur);
		return;
	}
	for (int i = 0; i <= n; ++i)
	{
		cur.push_back(i);
		distributions(n - i, k, cur, out);
		cur.pop_back();
	}
}

// perfect matchings of slot indices
void matchings(std::vector<int> slots, std::vector<std::pair<int, int>> &cur,
               std::vector<std::vector<std::pair<int, int>>> &out)
{
	if (slots.empty())
	{
		out.push_back(cur);
		return;
	}
	int a = slots.front();
	for (size_t i = 1; i < slots.size(); ++i)
	{
		int b = slots[i];
		std::vector<int> rest;
		for (size_t j = 1; j < slots.size(); ++j)
			if (j != i)
				rest.push_back(slots[j]);
		cur.emplace_back(a, b);
		matchings(rest, cur, out);
		cur.pop_back();
	}
}

// Build the concrete shapes of a candidate: spacetime slots paired off, inner
// indices tied by eta (two slots) or a generic rank-four tensor, one inner
// derivative binding the product of the non-lead atoms when the inner count
// is odd.
std::vector<Expression> buildShapes(const Candidate &c)
{
	int n = static_cast<int>(c.fields.size());
	// spacetime slots: (atom, deriv ordinal) plus gauge-field own indices
	struct SlotRef {
		int atom;
		int deriv; // -1: the gauge field's own spacetime index
	};
	std::vector<SlotRef> slotRefs;
	for (int i = 0; i < n; ++i)
	{
		for (int d = 0; d < c.derivs[i]; ++d)
			slotRefs.push_back({i, d});
		if (c.fields[i] == Species::GaugeA)
			slotRefs.push_back({i, -1});
	}
	if (slotRefs.size() % 2)
		return {};

	int innerCount = 0;
	for (auto s : c.fields)
		innerCount += speciesInfo(s).nInnerIdx;
	bool useNab = (innerCount % 2) != 0;
	int innerSlots = innerCount + (useNab ? 1 : 0);
	if (innerSlots != 0 && innerSlots != 2 && innerSlots != 4)
		return {};

	std::vector<int> slotIds(slotRefs.size());
	for (size_t i = 0; i < slotIds.size(); ++i)
		slotIds[i] = static_cast<int>(i);
	std::vector<std::vector<std::pair<int, int>>> pairSets;
	std::vector<std::pair<int, int>> cur;
	if (!slotIds.empty())
		matchings(slotIds, cur, pairSets);
	else
		pairSets.push_back({});

	std::vector<Expression> shapes;
	for (const auto &pairs : pairSets)
	{
		// spacetime labels per slot
		std::vector<std::string> slotLabel(slotRefs.size());
		for (size_t pi = 0; pi < pairs.size(); ++pi)
		{
			slotLabel[pairs[pi].first] = "s" + std::to_string(pi);
			slotLabel[pairs[pi].second] = "s" + std::to_string(pi);
		}
		// inner labels: i0.. on fields in order, then the derivative, tied by
		// eta directly (rank 2) or contracted into the tensor atom (rank 4)
		std::vector<Atom> atoms(n);
		int innerOrd = 0;
		for (int i = 0; i < n; ++i)
		{
			Species s = c.fields[i];
			Atom a;
			a.species = s;
			a.name = speciesInfo(s).printName;
			int slotIdx = 0;
			std::vector<std::string> myDerivs;
			for (size_t sr = 0; sr < slotRefs.size(); ++sr)
				if (slotRefs[sr].atom == i)
				{
					if (slotRefs[sr].deriv >= 0)
						myDerivs.push_back(slotLabel[sr]);
					else
						a.idx.push_back(
						    Index::ext(IndexKind::Spacetime, Variance::Lower, slotLabel[sr]));
					++slotIdx;
				}
			(void)slotIdx;
			if (speciesInfo(s).nInnerIdx == 1)
				a.idx.push_back(Index::ext(IndexKind::Inner, Variance::Upper,
				                           "q" + std::to_string(innerOrd++)));
			for (auto &dl : myDerivs)
				a.dst.push_back(Index::ext(IndexKind::Spacetime, Variance::Upper, dl));
			atoms[i] = std::move(a);
		}

		// lead atoms stay outside the inner-derivative binding
		auto isLead = [](Species s) {
			return s == Species::AntiGhost || s == Species::NL;
		};
		Expression lead = constantExpr(Rational(1));
		Expression tail = constantExpr(Rational(1));
		bool haveTail = false;
		for (int i = 0; i < n; ++i)
		{
			Expression ae = atomExpr(atoms[i]);
			if (isLead(c.fields[i]))
				lead = lead * ae;
			else
			{
				tail = tail * ae;
				haveTail = true;
			}
		}
		Expression full;
		std::string nabLabel = "q" + std::to_string(innerOrd);
		if (useNab)
		{
			if (!haveTail)
				continue;
			full = lead * derive(tail, Index::ext(IndexKind::Inner, Variance::Lower,
			                                      nabLabel));
			++innerOrd;
		}
		else
			full = lead * tail;

		// tie the inner labels together
		if (innerSlots == 2)
		{
			// rename the second inner label to match the first
			Expression tied;
			for (Monomial m : full.terms)
			{
				for (auto &a : m.atoms)
					for (auto *lst : {&a.idx, &a.dst, &a.din})
						for (auto &ix : *lst)
							if (!ix.isDummy() && !ix.name.empty() && ix.name[0] == 'q')
								ix.name = "qq";
				tied.terms.push_back(std::move(m));
			}
			full = canonicalize(tied);
		}
		else if (innerSlots == 4)
		{
			Atom t;
			t.species = Species::ConstTensor;
			t.name = "Tq";
			for (int k = 0; k < 4; ++k)
				t.idx.push_back(
				    Index::ext(IndexKind::Inner, Variance::Lower, "q" + std::to_string(k)));
			full = full * atomExpr(t);
		}
		if (!full.isZero())
			shapes.push_back(full);
	}
	return shapes;
}

// empty key: the shape vanishes on constrained fields or is a pure total
// derivative and is no operator at all
std::string shapeKey(const Expression &e)
{
	if (applyDivergenceConstraint(e).isZero())
		return "";
	bool limit = false;
	Expression nf = ibpNormalForm(e, 4000, nullptr, &limit);
	if (nf.isZero())
		return "";
	Rational c0 = nf.terms.front().coeff;
	nf = scale(nf, Rational(1) / c0);
	return print(nf);
}

std::string describe(const Candidate &c, bool useNab)
{
	std::string s;
	for (size_t i = 0; i < c.fields.size(); ++i)
	{
		for (int d = 0; d < c.derivs[i]; ++d)
			s += "d.";
		s += speciesInfo(c.fields[i]).printName;
		s += " ";
	}
	if (useNab)
		s += "(one inner derivative)";
	return s;
}

} // namespace

EnumerationResult enumerateOperators(const std::string &sector, int maxDim)
{
	EnumerationResult res;
	std::vector<std::vector<Species>> fieldSets;
	if (sector == "ghost")
	{
		for (int nA = 0; nA <= maxDim - 2; ++nA)
		{
			std::vector<Species> f = {Species::AntiGhost, Species::Ghost};
			for (int i = 0; i < nA; ++i)
				f.push_back(Species::GaugeA);
			fieldSets.push_back(f);
		}
	}
	else if (sector == "nl")
	{
		fieldSets.push_back({Species::NL, Species::NL});
		for (int nA = 0; nA <= maxDim - 2; ++nA)
		{
			std::vector<Species> f = {Species::NL};
			for (int i = 0; i < nA; ++i)
				f.push_back(Species::GaugeA);
			fieldSets.push_back(f);
		}
	}
	else if (sector == "gauge")
	{
		for (int nA = 1; nA <= maxDim; ++nA)
		{
			std::vector<Species> f;
			for (int i = 0; i < nA; ++i)
				f.push_back(Species::GaugeA);
			fieldSets.push_back(f);
		}
	}
	else
		throw ExprError("unknown sector '" + sector + "'");

	std::map<std::string, OperatorTerm> dedup;
	std::set<std::string> pre;
	std::vector<std::string> order;

	for (const auto &fields : fieldSets)
	{
		int baseDim2 = 0;
		for (auto s : fields)
			baseDim2 += speciesInfo(s).massDim2;
		int n = static_cast<int>(fields.size());
		for (int nD = 0; baseDim2 / 2 + nD <= maxDim; ++nD)
		{
			std::vector<std::vector<int>> dists;
			std::vector<int> cur;
			distributions(nD, n, cur, dists);
			for (auto &dist : dists)
			{
				Candidate c;
				c.fields = fields;
				c.derivs = dist;
				c.nA = 0;
				for (auto s : fields)
					if (s == Species::GaugeA)
						++c.nA;
				c.nD = nD;

				int innerCount = 0;
				for (auto s : fields)
					innerCount += speciesInfo(s).nInnerIdx;
				bool useNab = (innerCount % 2) != 0;

				// basic viability: spacetime slots pair up
				int stSlots = nD + c.nA;
				if (stSlots % 2)
					continue;
				pre.insert(describe(c, useNab));

				// sector filters
				bool ok = true;
				for (int i = 0; i < n; ++i)
					if (fields[i] == Species::AntiGhost && dist[i] == 0)
						ok = false;
				if (sector == "gauge" && nD == 0 && !useNab)
					ok = false; // derivative-free pure-gauge candidates drop out
				if (!ok)
					continue;

				for (auto &shape : buildShapes(c))
				{
					std::string key = shapeKey(shape);
					if (key.empty() || dedup.count(key))
						continue;
					OperatorTerm term;
					term.shape = shape;
					term.rendering = print(shape);
					term.tensorRank = 2;
					for (auto &m : shape.terms)
						for (auto &a : m.atoms)
							if (a.species == Species::ConstTensor)
								term.tensorRank = 4;
					term.massDim = massDimension(shape);
					term.ghostNumber = ghostNumber(shape);
					dedup.emplace(key, std::move(term));
					order.push_back(key);
				}
			}
		}
	}
	for (auto &k : order)
		res.terms.push_back(dedup.at(k));
	res.preFilter.assign(pre.begin(), pre.end());
	return res;
}

Expression buildAnsatz()
{
	Expression L = parse("1/2*xiN*h[.al]*h[al]");
	L = L + parse("cN*h[.al]*d[mu](A[.mu,al])");
	L = L + parse("et[al,be,ga,de]*h[.al]*nab[.be](A[mu,.ga]*A[.mu,.de])");
	L = L + parse("-Zw*d[.mu](ws[.al])*d[mu](w[al])");
	L = L + parse("-dt[al,be,ga,de]*d[.mu](ws[.al])*nab[.be](A[mu,.ga]*w[.de])");
	return L;
}

namespace {

const std::vector<std::string> &countertermUnknowns()
{
	static const std::vector<std::string> v = {"cN", "e1", "e2", "e3", "d1", "d2", "d3"};
	return v;
}

bool isUnknown(const std::string &n)
{
	for (auto &u : countertermUnknowns())
		if (u == n)
			return true;
	return false;
}

} // namespace

CountertermSolution solveCountertermConstraints()
{
	CountertermSolution sol;

	Expression ansatz = buildAnsatz();
	ansatz = substituteTensor(ansatz, "et", etaBasis4("e1", "e2", "e3"));
	ansatz = substituteTensor(ansatz, "dt", etaBasis4("d1", "d2", "d3"));
	// the reduction may leave split representatives of one class (frozen
	// reshuffling cycles); that only over-constrains, and the solution is
	// verified independently by the substituted residual below
	Expression varied = applyDivergenceConstraint(vary(ansatz, reducedBrstRules()));
	Expression reduced = ibpNormalForm(varied, 20000, nullptr, nullptr);

	// linear system in the unknown coefficients
	std::vector<SymPoly> eqs;
	for (auto &[skel, poly] : collectBySkeleton(reduced))
	{
		(void)skel;
		eqs.push_back(poly);
		sol.equations.push_back(poly.str() + " = 0");
	}

	std::map<std::string, SymPoly> solved;
	std::set<std::string> freeDirections;
	auto splitEq = [&](const SymPoly &eq, std::map<std::string, SymPoly> &rows,
	                   SymPoly &rhs) {
		rows.clear();
		rhs = SymPoly();
		for (auto &[mono, c] : eq.terms())
		{
			std::string u;
			SymProd rest;
			for (auto &[name, pow] : mono.exps())
			{
				if (isUnknown(name))
				{
					if (!u.empty() || pow != 1)
						throw ExprError("constraint system not linear in the unknowns");
					u = name;
				}
				else
					rest.mul(name, pow);
			}
			if (u.empty())
				rhs += SymPoly(c, rest);
			else
				rows[u] += SymPoly(c, rest);
		}
	};
	auto substituteAll = [&](const std::string &u, const SymPoly &value) {
		for (auto &e2 : eqs)
		{
			if (value.isZero())
				e2 = e2.substitute(u, Rational(0), SymProd());
			else if (value.isMonomial())
			{
				auto [vm, vc] = *value.terms().begin();
				e2 = e2.substitute(u, vc, vm);
			}
			else
				throw ExprError("polynomial back-substitution not supported");
		}
		for (auto &[su, sv] : solved)
		{
			(void)su;
			if (value.isZero())
				sv = sv.substitute(u, Rational(0), SymProd());
			else if (value.isMonomial())
			{
				auto [vm, vc] = *value.terms().begin();
				sv = sv.substitute(u, vc, vm);
			}
		}
	};

	// phase one: equations with a single unknown; phase two: general
	// elimination on whatever remains (relations between trivially-acting
	// directions)
	for (int phase = 0; phase < 2; ++phase)
	{
		bool progress = true;
		while (progress)
		{
			progress = false;
			for (auto &eq : eqs)
			{
				if (eq.isZero())
					continue;
				std::map<std::string, SymPoly> rows;
				SymPoly rhs;
				splitEq(eq, rows, rhs);
				if (rows.empty())
					continue;
				if (phase == 0 && rows.size() != 1)
					continue;
				auto &[u, coeff] = *rows.begin();
				if (!coeff.isMonomial())
					continue;
				auto [cm, cc] = *coeff.terms().begin();
				SymPoly value = -rhs;
				for (auto it = std::next(rows.begin()); it != rows.end(); ++it)
					value = value - it->second * SymPoly(Rational(1), SymProd(it->first));
				value = value.divByMonomial(cc, cm);
				if (!(value.isZero() || value.isMonomial()))
					continue;
				solved[u] = value;
				substituteAll(u, value);
				progress = true;
			}
		}
	}
	// leftover unknowns act trivially (or never appear): fixed to zero
	for (auto &u : countertermUnknowns())
		if (!solved.count(u))
		{
			freeDirections.insert(u);
			solved[u] = SymPoly();
			substituteAll(u, SymPoly());
		}

	bool allResolved = true;
	for (auto &eq : eqs)
		if (!eq.isZero())
			allResolved = false;

	for (auto &[u, v] : solved)
		sol.solved.push_back(u + " = " + v.str() +
		                     (freeDirections.count(u)
		                          ? "  (direction acts trivially in the ansatz; fixed)"
		                          : ""));
	sol.values = solved;

	// verify: substitute back and reduce; the variation must vanish
	Expression sub = varied;
	for (auto &[u, v] : solved)
	{
		if (v.isZero())
			sub = substituteScalar(sub, u, Rational(0), SymProd());
		else
		{
			auto [vm, vc] = *v.terms().begin();
			sub = substituteScalar(sub, u, vc, vm);
		}
	}
	Expression resid = ibpNormalForm(sub, 20000, nullptr, nullptr);
	sol.residualZero = resid.isZero();

	auto expect = [&](const std::string &u, const SymPoly &want, const std::string &label) {
		bool okv = solved.count(u) && solved.at(u) == want;
		sol.checks.push_back(CheckResult::of("counterterm." + u, label, okv,
		                                     "solved: " + solved.at(u).str()));
	};
	SymPoly cNwant(Rational(1), SymProd("Zw") * SymProd("Z", -1) * SymProd("N", -1));
	expect("cN", cNwant, "gauge-fixing coupling equals Zw/(Z N)");
	SymPoly dwant(Rational(1), SymProd("Zw") * SymProd("N", -1));
	expect("d3", dwant, "ghost-gauge tensor: metric pair component Zw/N");
	expect("d2", -dwant, "ghost-gauge tensor: crossed pair component -Zw/N");
	expect("d1", SymPoly(), "ghost-gauge tensor: trace pair component vanishes");
	expect("e1", SymPoly(), "auxiliary-field tensor vanishes (trace pair)");
	expect("e2", SymPoly(), "auxiliary-field tensor vanishes (metric pair)");
	expect("e3", SymPoly(), "auxiliary-field tensor vanishes (crossed pair)");
	sol.checks.push_back(CheckResult::of("counterterm.residual",
	                                     "substituted variation reduces to zero",
	                                     sol.residualZero));
	sol.checks.push_back(
	    CheckResult::of("counterterm.system", "linear system fully resolved", allResolved));
	return sol;
}

BareMatch matchToBare(const CountertermSolution &sol)
{
	BareMatch out;

	// solved Lagrangian: substitute the solution into the ansatz
	Expression L = buildAnsatz();
	L = substituteTensor(L, "et", etaBasis4("e1", "e2", "e3"));
	L = substituteTensor(L, "dt", etaBasis4("d1", "d2", "d3"));
	for (auto &[u, v] : sol.values)
	{
		if (v.isZero())
			L = substituteScalar(L, u, Rational(0), SymProd());
		else
		{
			auto [vm, vc] = *v.terms().begin();
			L = substituteScalar(L, u, vc, vm);
		}
	}
	L = applyDivergenceConstraint(L);

	struct BarePiece {
		std::string name;
		Expression expr;
	};
	std::vector<BarePiece> bare = {
	    {"auxiliary-field square", parse("1/2*xi*h[.al]*h[al]")},
	    {"gauge-fixing coupling", parse("h[.al]*d[mu](A[.mu,al])")},
	    {"ghost kinetic", parse("-d[.mu](ws[.al])*d[mu](w[al])")},
	    {"ghost-gauge coupling",
	     parse("-d[.mu](ws[.al])*(A[mu,.be]*nab[be](w[al]) - w[be]*nab[.be](A[mu,al]))")},
	};

	// group the solved Lagrangian by skeleton
	auto skeletons = collectBySkeleton(L);
	std::vector<bool> used(skeletons.size(), false);

	auto derivCountInner = [](const Monomial &m) {
		int k = 0;
		for (auto &a : m.atoms)
			k += static_cast<int>(a.din.size());
		return k;
	};

	for (auto &b : bare)
	{
		auto bSkel = collectBySkeleton(b.expr);
		std::optional<SymPoly> constant;
		bool okRow = true;
		bool rescaled = false;
		for (auto &[bm, bc] : bSkel)
		{
			// find the matching solved skeleton
			std::string bkey;
			Monomial bb = bm;
			bb.coeff = Rational(1);
			bb.sym = SymProd();
			canonicalizeMonomial(bb, &bkey);
			bool found = false;
			for (size_t i = 0; i < skeletons.size(); ++i)
			{
				std::string skey;
				Monomial sm = skeletons[i].first;
				sm.coeff = Rational(1);
				sm.sym = SymProd();
				canonicalizeMonomial(sm, &skey);
				if (skey != bkey)
					continue;
				found = true;
				used[i] = true;
				// ratio normalized by N^{inner derivatives}
				int k = derivCountInner(sm);
				SymPoly ratio = skeletons[i].second;
				// divide by the bare coefficient (monomial, e.g. xi or a rational)
				auto [bmono, bcoef] = *bc.terms().begin();
				ratio = ratio.divByMonomial(bcoef, bmono);
				if (k > 0)
				{
					SymPoly nk(Rational(1), SymProd("N", k));
					ratio = ratio * nk;
					rescaled = true;
				}
				if (!constant)
					constant = ratio;
				else if (!(*constant == ratio))
					okRow = false;
			}
			if (!found)
				okRow = false;
		}
		out.rows.push_back({b.name, constant ? constant->str() : "(unmatched)",
		                    rescaled, false});
		if (!okRow || !constant)
			++out.unmatchedBare;
	}
	for (size_t i = 0; i < skeletons.size(); ++i)
		if (!used[i])
			++out.unmatchedSolved;

	// gauge kinetic sector: the rescaled-derivative field strength squared,
	// matched term family by term family
	{
		Expression bareF = lagrangianFsq();
		Expression tilde = parse("d[.mu](A[.nu,al]) - d[.nu](A[.mu,al])"
		                         " + N^-1*A[.mu,be]*nab[.be](A[.nu,al])"
		                         " - N^-1*A[.nu,be]*nab[.be](A[.mu,al])");
		Expression solvedGauge = scale(tilde * tilde, Rational(-1, 4), SymProd("Za"));
		auto bSkel = collectBySkeleton(bareF);
		auto sSkel = collectBySkeleton(solvedGauge);
		bool okGauge = bSkel.size() == sSkel.size();
		std::optional<SymPoly> constant;
		for (auto &[sm, sc] : sSkel)
		{
			std::string skey;
			Monomial s0 = sm;
			s0.coeff = Rational(1);
			s0.sym = SymProd();
			canonicalizeMonomial(s0, &skey);
			bool found = false;
			for (auto &[bm, bc] : bSkel)
			{
				std::string bkey;
				Monomial b0 = bm;
				b0.coeff = Rational(1);
				b0.sym = SymProd();
				canonicalizeMonomial(b0, &bkey);
				if (bkey != skey)
					continue;
				found = true;
				int k = derivCountInner(sm);
				auto [bmono, bcoef] = *bc.terms().begin();
				SymPoly ratio = sc.divByMonomial(bcoef, bmono) *
				                SymPoly(Rational(1), SymProd("N", k));
				if (!constant)
					constant = ratio;
				else if (!(*constant == ratio))
					okGauge = false;
			}
			if (!found)
				okGauge = false;
		}
		out.rows.push_back({"gauge kinetic (rescaled field strength)",
		                    constant ? constant->str() : "(unmatched)", true, false});
		if (!okGauge)
			++out.unmatchedBare;
		out.checks.push_back(CheckResult::of(
		    "match.gauge_kinetic",
		    "rescaled-derivative field strength square matches term for term", okGauge));
	}

	// matter sector rows are matched at shape level only; the spinor structure
	// of the matter atom is never expanded
	out.rows.push_back({"matter kinetic", "Zpsi", true, true});
	out.rows.push_back({"matter mass", "mN", false, true});

	out.checks.push_back(CheckResult::of(
	    "match.complete", "no unmatched terms on either side",
	    out.unmatchedSolved == 0 && out.unmatchedBare == 0));
	return out;
}

} // namespace vpdw
