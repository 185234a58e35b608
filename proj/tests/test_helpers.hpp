#pragma once

#include "vpdw/expr.hpp"

#include <random>

namespace vpdw::testing {

// Random valid monomials over the field atoms, used by the property tests.
// Slots are first created with unique free labels, then some same-kind labels
// are merged into contracted pairs.
class RandomExprGen {
  public:
	explicit RandomExprGen(uint64_t seed) : rng_(seed) {}

	std::mt19937_64 &rng() { return rng_; }

	int uniform(int lo, int hi)
	{
		std::uniform_int_distribution<int> d(lo, hi);
		return d(rng_);
	}

	Monomial monomial(int maxAtoms = 4, bool derivatives = true)
	{
		static const Species pool[] = {Species::GaugeA, Species::Ghost,
		                               Species::AntiGhost, Species::NL,
		                               Species::GaugeParam, Species::Matter};
		Monomial m;
		m.coeff = Rational(uniform(1, 5), uniform(1, 3));
		if (uniform(0, 1))
			m.coeff = -m.coeff;
		int n = uniform(1, maxAtoms);
		int label = 0;
		auto fresh = [&](IndexKind k) {
			return Index::ext(k, uniform(0, 1) ? Variance::Upper : Variance::Lower,
			                  "x" + std::to_string(label++));
		};
		for (int i = 0; i < n; ++i)
		{
			Species s = pool[uniform(0, 5)];
			Atom a;
			a.species = s;
			a.name = speciesInfo(s).printName;
			for (int k = 0; k < speciesInfo(s).nSpacetimeIdx; ++k)
				a.idx.push_back(fresh(IndexKind::Spacetime));
			for (int k = 0; k < speciesInfo(s).nInnerIdx; ++k)
				a.idx.push_back(fresh(IndexKind::Inner));
			if (derivatives)
			{
				for (int k = uniform(0, 2); k-- > 0;)
					a.dst.push_back(fresh(IndexKind::Spacetime));
				for (int k = uniform(0, 2); k-- > 0;)
					a.din.push_back(fresh(IndexKind::Inner));
			}
			m.atoms.push_back(std::move(a));
		}
		// merge some same-kind labels into contracted pairs
		contractSome(m);
		return m;
	}

  private:
	std::mt19937_64 rng_;

	void contractSome(Monomial &m)
	{
		std::vector<Index *> st, in;
		for (auto &a : m.atoms)
		{
			for (auto &ix : a.idx)
				(ix.kind == IndexKind::Spacetime ? st : in).push_back(&ix);
			for (auto &ix : a.dst)
				st.push_back(&ix);
			for (auto &ix : a.din)
				in.push_back(&ix);
		}
		int id = 1;
		for (auto *v : {&st, &in})
		{
			std::shuffle(v->begin(), v->end(), rng_);
			size_t i = 0;
			while (i + 1 < v->size())
			{
				if (uniform(0, 1))
				{
					(*v)[i]->dummy = id;
					(*v)[i]->name.clear();
					(*v)[i + 1]->dummy = id;
					(*v)[i + 1]->name.clear();
					++id;
					i += 2;
				}
				else
					++i;
			}
		}
	}
};

} // namespace vpdw::testing
