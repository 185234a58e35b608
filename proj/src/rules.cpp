#include "vpdw/rules.hpp"

#include "vpdw/calculus.hpp"
#include "vpdw/parser.hpp"

namespace vpdw {

namespace {

RuleSet makeRules(std::string name, std::string param, Species paramSpecies,
                  std::map<Species, std::string> texts)
{
	RuleSet rs;
	rs.name = std::move(name);
	rs.paramName = std::move(param);
	rs.paramSpecies = paramSpecies;
	for (auto &[s, t] : texts)
		rs.rules[s] = t.empty() ? Expression{} : parse(t);
	return rs;
}

} // namespace

const RuleSet &gaugeRules()
{
	static const RuleSet rs = makeRules(
	    "gauge", "E", Species::GaugeParam,
	    {
	        {Species::GaugeA, "d[.@0](E[@1]) + A[.@0,zz]*nab[.zz](E[@1])"
	                          " - E[zz]*nab[.zz](A[.@0,@1])"},
	        {Species::Matter, "-E[zz]*nab[.zz](psi)"},
	    });
	return rs;
}

const RuleSet &gaugeResidualRules()
{
	static const RuleSet rs = makeRules(
	    "gauge-residual", "Ep", Species::ResidualParam,
	    {
	        {Species::GaugeA, "d[.@0](Ep[@1]) + A[.@0,zz]*nab[.zz](Ep[@1])"
	                          " - Ep[zz]*nab[.zz](A[.@0,@1])"},
	        {Species::Matter, "-Ep[zz]*nab[.zz](psi)"},
	    });
	return rs;
}

const RuleSet &brstRules()
{
	static const RuleSet rs = makeRules(
	    "brst", "theta", Species::Theta,
	    {
	        {Species::GaugeA, "theta*d[.@0](w[@1]) + theta*A[.@0,zz]*nab[.zz](w[@1])"
	                          " - theta*w[zz]*nab[.zz](A[.@0,@1])"},
	        {Species::AntiGhost, "-theta*h[.@0]"},
	        {Species::Ghost, "-theta*w[zz]*nab[.zz](w[@0])"},
	        {Species::NL, ""},
	        {Species::Matter, "-theta*w[zz]*nab[.zz](psi)"},
	    });
	return rs;
}

const RuleSet &generalBrstRules()
{
	// unknown constant tensors; the inner derivative binds the product, the
	// Leibniz expansion happens at parse time
	static const RuleSet rs = makeRules(
	    "general-brst", "theta", Species::Theta,
	    {
	        {Species::GaugeA, "theta*Bt[@1,.zz]*d[.@0](w[zz])"
	                          " + theta*Dt[@1,zz,.ya,.yb]*nab[.zz](A[.@0,ya]*w[yb])"},
	        {Species::AntiGhost, "-theta*h[.@0]"},
	        {Species::Ghost, "-theta*Et[@0,zz,.ya,.yb]*nab[.zz](w[ya]*w[yb])"},
	        {Species::NL, ""},
	        {Species::Matter, "-theta*Ct[zz,.ya]*nab[.zz](psi)*w[ya]"},
	    });
	return rs;
}

const RuleSet &reducedBrstRules()
{
	static const RuleSet rs = makeRules(
	    "reduced-brst", "theta", Species::Theta,
	    {
	        {Species::GaugeA, "theta*Z*N*d[.@0](w[@1]) + theta*Z*A[.@0,zz]*nab[.zz](w[@1])"
	                          " - theta*Z*w[zz]*nab[.zz](A[.@0,@1])"},
	        {Species::AntiGhost, "-theta*h[.@0]"},
	        {Species::Ghost, "-theta*Z*w[zz]*nab[.zz](w[@0])"},
	        {Species::NL, ""},
	        {Species::Matter, "-theta*Z*w[zz]*nab[.zz](psi)"},
	    });
	return rs;
}

RuleSet withParameterName(const RuleSet &rs, const std::string &newParam)
{
	RuleSet out = rs;
	out.paramName = newParam;
	for (auto &[s, e] : out.rules)
		e = renameAtom(e, rs.paramSpecies, rs.paramName, newParam);
	return out;
}

namespace {

bool isInert(Species s)
{
	switch (s)
	{
	case Species::Theta:
	case Species::GaugeParam:
	case Species::ResidualParam:
	case Species::InnerRotation:
	case Species::ConstTensor:
		return true;
	default:
		return false;
	}
}

// Leibniz attach without canonicalization
void rawAttach(std::vector<Monomial> &monos, const Index &d)
{
	std::vector<Monomial> out;
	bool inner = d.kind == IndexKind::Inner;
	for (const auto &m : monos)
		for (size_t i = 0; i < m.atoms.size(); ++i)
		{
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
	monos = std::move(out);
}

} // namespace

Expression vary(const Expression &ein, const RuleSet &rs)
{
	Expression e = canonicalize(ein);
	Expression out;
	for (const auto &m : e.terms)
	{
		int hostMax = maxDummyId(m);
		for (size_t pos = 0; pos < m.atoms.size(); ++pos)
		{
			const Atom &target = m.atoms[pos];
			if (isInert(target.species))
				continue;
			auto it = rs.rules.find(target.species);
			if (it == rs.rules.end())
				throw ExprError("rule set '" + rs.name + "' has no rule for species " +
				                speciesInfo(target.species).printName);
			const Expression &tmpl = it->second;
			if (tmpl.isZero())
				continue;

			// instantiate: offset template dummies, bind placeholders to the
			// target atom's indices, reapply the target's derivatives
			std::vector<Monomial> pieces;
			for (Monomial tm : tmpl.terms)
			{
				int tmplMax = maxDummyId(tm);
				(void)tmplMax;
				for (auto &a : tm.atoms)
					for (auto *lst : {&a.idx, &a.dst, &a.din})
						for (auto &ix : *lst)
						{
							if (ix.isDummy())
								ix.dummy += hostMax;
							else if (!ix.name.empty() && ix.name[0] == '@')
							{
								size_t k = std::stoul(ix.name.substr(1));
								if (k >= target.idx.size())
									throw ExprError("placeholder out of range in rule for " +
									                target.name);
								ix = target.idx[k];
							}
						}
				pieces.push_back(std::move(tm));
			}
			for (const auto &d : target.dst)
				rawAttach(pieces, d);
			for (const auto &d : target.din)
				rawAttach(pieces, d);

			// splice in place of the target atom; the variation is an even
			// derivation, so no sign arises
			for (const auto &piece : pieces)
			{
				Monomial t;
				t.coeff = m.coeff * piece.coeff;
				t.sym = m.sym * piece.sym;
				t.atoms.assign(m.atoms.begin(), m.atoms.begin() + pos);
				t.atoms.insert(t.atoms.end(), piece.atoms.begin(), piece.atoms.end());
				t.atoms.insert(t.atoms.end(), m.atoms.begin() + pos + 1, m.atoms.end());
				out.terms.push_back(std::move(t));
			}
		}
	}
	return canonicalize(out);
}

} // namespace vpdw
