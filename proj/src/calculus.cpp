#include "vpdw/calculus.hpp"

#include "vpdw/parser.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace vpdw {

Expression derive(const Expression &e, const Index &d)
{
	bool inner = d.kind == IndexKind::Inner;
	Expression out;
	for (const auto &m : e.terms)
	{
		for (size_t i = 0; i < m.atoms.size(); ++i)
		{
			const Atom &a = m.atoms[i];
			const auto &info = speciesInfo(a.species);
			if (inner ? info.constInner : info.constSpacetime)
				continue;
			Monomial t = m;
			if (inner && a.species == Species::ResidualParam)
			{
				// parameter linear in the inner coordinate: the derivative is a
				// constant-in-X antisymmetric rotation coefficient
				Atom w;
				w.species = Species::InnerRotation;
				w.name = speciesInfo(Species::InnerRotation).printName;
				w.idx = {a.idx[0], d};
				w.dst = a.dst;
				t.atoms[i] = std::move(w);
			}
			else if (inner)
				t.atoms[i].din.push_back(d);
			else
				t.atoms[i].dst.push_back(d);
			out.terms.push_back(std::move(t));
		}
	}
	return canonicalize(out);
}

Rational massDimension(const Expression &e)
{
	if (e.isZero())
		throw ExprError("mass dimension of the zero expression is undefined");
	std::optional<int> dim2;
	std::string offenders;
	for (const auto &m : e.terms)
	{
		int d = 0;
		for (const auto &a : m.atoms)
			d += speciesInfo(a.species).massDim2 + 2 * static_cast<int>(a.dst.size());
		if (!dim2)
			dim2 = d;
		else if (*dim2 != d)
			offenders += "  " + print(m) + "  (2*dim = " + std::to_string(d) + ")\n";
	}
	if (!offenders.empty())
		throw ExprError("expression is not homogeneous in mass dimension:\n" + offenders);
	return Rational(*dim2, 2);
}

int ghostNumber(const Expression &e)
{
	if (e.isZero())
		throw ExprError("ghost number of the zero expression is undefined");
	std::optional<int> g;
	std::string offenders;
	for (const auto &m : e.terms)
	{
		int gg = 0;
		for (const auto &a : m.atoms)
			gg += speciesInfo(a.species).ghost;
		if (!g)
			g = gg;
		else if (*g != gg)
			offenders += "  " + print(m) + "  (ghost = " + std::to_string(gg) + ")\n";
	}
	if (!offenders.empty())
		throw ExprError("expression is not homogeneous in ghost number:\n" + offenders);
	return *g;
}

std::vector<int> scaleWeights(const Expression &e)
{
	return std::vector<int>(e.terms.size(), 0);
}

namespace {

bool violatesDivergence(const Atom &a)
{
	if (!speciesNeedsDivergenceConstraint(a.species))
		return false;
	const auto &info = speciesInfo(a.species);
	// the atom's own inner index slots
	for (int k = info.nSpacetimeIdx; k < static_cast<int>(a.idx.size()); ++k)
	{
		const Index &own = a.idx[k];
		if (!own.isDummy())
			continue;
		for (const auto &dv : a.din)
			if (dv.dummy == own.dummy)
				return true;
	}
	return false;
}

} // namespace

Expression applyDivergenceConstraint(const Expression &e)
{
	Expression out;
	for (const auto &m : e.terms)
	{
		bool drop = false;
		for (const auto &a : m.atoms)
			if (violatesDivergence(a))
			{
				drop = true;
				break;
			}
		if (!drop)
			out.terms.push_back(m);
	}
	return canonicalize(out);
}

namespace {

struct SlotAtt {
	enum Kind { ExtA, RemA, SelfA } kind;
	std::string name;
	Variance var = Variance::Upper;
	int dummy = 0;
	int selfSlot = -1;
};

// substitute the first occurrence of the tensor in the monomial
std::vector<Monomial> substituteOnce(const Monomial &m, size_t tpos,
                                     const std::vector<EtaPairing> &expansion)
{
	const Atom &tensor = m.atoms[tpos];
	if (!tensor.dst.empty() || !tensor.din.empty())
		throw ExprError("constant tensor cannot carry derivatives");
	int nSlots = static_cast<int>(tensor.idx.size());

	// remaining monomial without the tensor
	Monomial rest;
	rest.coeff = m.coeff;
	rest.sym = m.sym;
	for (size_t i = 0; i < m.atoms.size(); ++i)
		if (i != tpos)
			rest.atoms.push_back(m.atoms[i]);

	// attachment of each tensor slot
	std::vector<SlotAtt> att(nSlots);
	for (int s = 0; s < nSlots; ++s)
	{
		const Index &ix = tensor.idx[s];
		if (!ix.isDummy())
		{
			att[s] = {SlotAtt::ExtA, ix.name, ix.var, 0, -1};
			continue;
		}
		bool foundInRest = false;
		for (const auto &a : rest.atoms)
			for (int li = 0; li < 3; ++li)
			{
				const auto &lst = li == 0 ? a.idx : (li == 1 ? a.dst : a.din);
				for (const auto &jx : lst)
					if (jx.dummy == ix.dummy)
						foundInRest = true;
			}
		if (foundInRest)
			att[s] = {SlotAtt::RemA, "", Variance::Upper, ix.dummy, -1};
		else
		{
			int other = -1;
			for (int s2 = 0; s2 < nSlots; ++s2)
				if (s2 != s && tensor.idx[s2].dummy == ix.dummy)
					other = s2;
			if (other < 0)
				throw ExprError("unpaired contracted index on tensor " + tensor.name);
			att[s] = {SlotAtt::SelfA, "", Variance::Upper, ix.dummy, other};
		}
	}

	std::vector<Monomial> out;
	for (const auto &pairing : expansion)
	{
		if (static_cast<int>(pairing.pairs.size() * 2) != nSlots)
			throw ExprError("pairing does not cover tensor " + tensor.name);
		std::vector<int> mate(nSlots, -1);
		for (auto &[a, b] : pairing.pairs)
		{
			mate[a] = b;
			mate[b] = a;
		}
		Monomial cur = rest;
		cur.coeff *= pairing.coeff;
		cur.sym = cur.sym * pairing.sym;

		auto setRemSlot = [&](int dummyId, const SlotAtt &target) {
			for (auto &a : cur.atoms)
				for (int li = 0; li < 3; ++li)
				{
					auto &lst = li == 0 ? a.idx : (li == 1 ? a.dst : a.din);
					for (auto &jx : lst)
						if (jx.isDummy() && jx.dummy == dummyId)
						{
							if (target.kind == SlotAtt::ExtA)
							{
								jx.dummy = 0;
								jx.name = target.name;
								jx.var = target.var;
							}
							else
								jx.dummy = target.dummy;
							return;
						}
				}
			throw ExprError("dangling contraction while substituting " + tensor.name);
		};

		// alternating walks pairing-edge / self-link; a path between two
		// outer attachments becomes a direct connection, a closed cycle is a
		// metric trace
		std::vector<char> seen(nSlots, 0);
		for (int s = 0; s < nSlots; ++s)
		{
			if (seen[s] || att[s].kind == SlotAtt::SelfA)
				continue;
			seen[s] = 1;
			int t = mate[s];
			while (att[t].kind == SlotAtt::SelfA)
			{
				seen[t] = 1;
				int u = att[t].selfSlot;
				seen[u] = 1;
				t = mate[u];
			}
			seen[t] = 1;
			const SlotAtt &A = att[s];
			const SlotAtt &B = att[t];
			if (A.kind == SlotAtt::ExtA && B.kind == SlotAtt::ExtA)
				throw ExprError("pairing connects two free indices; explicit metric "
				                "factors are not represented");
			if (A.kind == SlotAtt::ExtA)
				setRemSlot(B.dummy, A);
			else if (B.kind == SlotAtt::ExtA)
				setRemSlot(A.dummy, B);
			else
			{
				SlotAtt tgt;
				tgt.kind = SlotAtt::RemA;
				tgt.dummy = A.dummy;
				setRemSlot(B.dummy, tgt);
			}
		}
		for (int s = 0; s < nSlots; ++s)
		{
			if (seen[s])
				continue;
			cur.coeff *= Rational(4);
			int c = s;
			while (!seen[c])
			{
				seen[c] = 1;
				int j = mate[c];
				seen[j] = 1;
				c = att[j].selfSlot;
			}
		}
		out.push_back(std::move(cur));
	}
	return out;
}

} // namespace

Expression substituteTensor(const Expression &e, const std::string &tensorName,
                            const std::vector<EtaPairing> &expansion)
{
	Expression work = e;
	bool changed = true;
	while (changed)
	{
		changed = false;
		Expression next;
		for (const auto &m : work.terms)
		{
			size_t tpos = m.atoms.size();
			for (size_t i = 0; i < m.atoms.size(); ++i)
				if (m.atoms[i].species == Species::ConstTensor && m.atoms[i].name == tensorName)
				{
					tpos = i;
					break;
				}
			if (tpos == m.atoms.size())
			{
				next.terms.push_back(m);
				continue;
			}
			changed = true;
			for (auto &t : substituteOnce(m, tpos, expansion))
				next.terms.push_back(std::move(t));
		}
		work = canonicalize(next);
	}
	return work;
}

Expression renameAtom(const Expression &e, Species s, const std::string &from,
                      const std::string &to)
{
	Expression out = e;
	for (auto &m : out.terms)
		for (auto &a : m.atoms)
			if (a.species == s && a.name == from)
				a.name = to;
	return canonicalize(out);
}

Expression substituteScalar(const Expression &e, const std::string &name,
                            const Rational &c, const SymProd &m)
{
	Expression out;
	for (auto t : e.terms)
	{
		auto it = t.sym.exps().find(name);
		if (it != t.sym.exps().end())
		{
			int p = it->second;
			t.sym.mul(name, -p);
			Rational cp(1);
			for (int i = 0; i < (p < 0 ? -p : p); ++i)
				cp *= c;
			if (p < 0)
				cp = Rational(1) / cp;
			t.coeff *= cp;
			for (auto &[n, e2] : m.exps())
				t.sym.mul(n, e2 * p);
		}
		out.terms.push_back(std::move(t));
	}
	return canonicalize(out);
}

Expression dropMonomialsWith(const Expression &e, Species s)
{
	Expression out;
	for (const auto &m : e.terms)
	{
		bool has = false;
		for (const auto &a : m.atoms)
			if (a.species == s)
				has = true;
		if (!has)
			out.terms.push_back(m);
	}
	return canonicalize(out);
}

std::vector<std::pair<Monomial, SymPoly>> collectBySkeleton(const Expression &e)
{
	std::map<std::string, std::pair<Monomial, SymPoly>> acc;
	for (const auto &m : e.terms)
	{
		std::string key;
		Monomial bare = m;
		bare.coeff = Rational(1);
		bare.sym = SymProd();
		auto cm = canonicalizeMonomial(bare, &key);
		if (!cm)
			continue;
		auto it = acc.find(key);
		if (it == acc.end())
		{
			auto &slot = acc[key];
			slot.first = *cm;
			slot.second = SymPoly(m.coeff, m.sym);
		}
		else
			it->second.second += SymPoly(m.coeff, m.sym);
	}
	std::vector<std::pair<Monomial, SymPoly>> out;
	for (auto &[k, v] : acc)
		if (!v.second.isZero())
			out.push_back(std::move(v));
	return out;
}

} // namespace vpdw
