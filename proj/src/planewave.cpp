#include "vpdw/planewave.hpp"

#include "vpdw/parser.hpp"

#include <algorithm>
#include <functional>

namespace vpdw {

namespace {

Rational eta(int a, int b)
{
	if (a != b)
		return Rational(0);
	return a == 0 ? Rational(-1) : Rational(1);
}

Vec4 add(const Vec4 &x, const Vec4 &y)
{
	Vec4 r;
	for (int c = 0; c < 4; ++c)
		r[c] = x[c] + y[c];
	return r;
}

bool isZero(const Vec4 &x)
{
	for (auto &c : x)
		if (!c.isZero())
			return false;
	return true;
}

// value of one monomial under a fixed mode assignment, summed over all
// component values of the contracted indices
GaussianRational monomialValue(const Monomial &m, const std::vector<const PlaneWaveMode *> &mode)
{
	// collect dummy slots: (pair id) -> list of (atom, which component source)
	struct Slot {
		int atom;
		int kind; // 0 own spacetime pol, 1 own inner pol, 2 dst (p), 3 din (P)
	};
	std::map<int, std::vector<Slot>> pairs;
	int nDerivs = 0;

	auto classify = [&](const Atom &a, int ai) {
		const auto &info = speciesInfo(a.species);
		for (int k = 0; k < static_cast<int>(a.idx.size()); ++k)
		{
			const Index &ix = a.idx[k];
			if (!ix.isDummy())
				throw ExprError("plane-wave evaluation needs an index scalar");
			pairs[ix.dummy].push_back({ai, k < info.nSpacetimeIdx ? 0 : 1});
		}
		for (const auto &ix : a.dst)
		{
			if (!ix.isDummy())
				throw ExprError("plane-wave evaluation needs an index scalar");
			pairs[ix.dummy].push_back({ai, 2});
			++nDerivs;
		}
		for (const auto &ix : a.din)
		{
			if (!ix.isDummy())
				throw ExprError("plane-wave evaluation needs an index scalar");
			pairs[ix.dummy].push_back({ai, 3});
			++nDerivs;
		}
	};
	for (int ai = 0; ai < static_cast<int>(m.atoms.size()); ++ai)
		classify(m.atoms[ai], ai);

	std::vector<std::vector<Slot>> pairList;
	for (auto &[id, slots] : pairs)
	{
		if (slots.size() != 2)
			throw ExprError("malformed contraction in plane-wave evaluation");
		pairList.push_back(slots);
	}

	auto componentOf = [&](const Slot &s, int c) -> Rational {
		const PlaneWaveMode &md = *mode[s.atom];
		switch (s.kind)
		{
		case 0:
			return md.pol[c];
		case 1:
			return md.u[c];
		case 2:
			return md.p[c];
		default:
			return md.P[c];
		}
	};

	// scalar amplitudes
	Rational base = m.coeff;
	for (int ai = 0; ai < static_cast<int>(m.atoms.size()); ++ai)
		base = base * mode[ai]->amp;

	// sum over component assignments of every contracted pair
	Rational sum(0);
	size_t np = pairList.size();
	std::vector<int> comp(np, 0);
	while (true)
	{
		Rational term = base;
		for (size_t i = 0; i < np && !term.isZero(); ++i)
		{
			int c = comp[i];
			term = term * eta(c, c) * componentOf(pairList[i][0], c) *
			       componentOf(pairList[i][1], c);
		}
		sum += term;
		size_t j = 0;
		for (; j < np; ++j)
		{
			if (++comp[j] < 4)
				break;
			comp[j] = 0;
		}
		if (j == np)
			break;
	}

	// each derivative contributes a factor i
	GaussianRational v{sum, Rational(0)};
	GaussianRational iPow{Rational(1), Rational(0)};
	for (int k = 0; k < nDerivs % 4; ++k)
		iPow = iPow * GaussianRational{Rational(0), Rational(1)};
	return v * iPow;
}

} // namespace

GaussianRational planeWaveEvaluate(const Expression &e,
                                   const std::map<std::string, std::vector<PlaneWaveMode>> &modes)
{
	GaussianRational total{Rational(0), Rational(0)};
	for (const auto &m : e.terms)
	{
		if (!m.sym.isOne())
			throw ExprError("plane-wave evaluation with symbolic coefficients");
		// odd species may appear once per monomial; relative signs are then
		// fixed by the canonical ordering
		std::map<std::string, int> oddCount;
		for (const auto &a : m.atoms)
			if (a.odd() && ++oddCount[a.name] > 1)
				throw ExprError("plane-wave evaluation limited to single odd instances");

		// enumerate injective assignments of modes per print name
		int n = static_cast<int>(m.atoms.size());
		std::vector<const std::vector<PlaneWaveMode> *> pool(n);
		for (int i = 0; i < n; ++i)
		{
			auto it = modes.find(m.atoms[i].name);
			if (it == modes.end())
				throw ExprError("no modes supplied for " + m.atoms[i].name);
			pool[i] = &it->second;
		}
		std::vector<const PlaneWaveMode *> assign(n, nullptr);
		std::function<void(int)> rec = [&](int i) {
			if (i == n)
			{
				Vec4 ptot{}, Ptot{};
				for (int a = 0; a < n; ++a)
				{
					ptot = add(ptot, assign[a]->p);
					Ptot = add(Ptot, assign[a]->P);
				}
				if (!isZero(ptot) || !isZero(Ptot))
					return; // integration kills non-conserving assignments
				total = total + monomialValue(m, assign);
				return;
			}
			for (const auto &md : *pool[i])
			{
				bool used = false;
				for (int a = 0; a < i; ++a)
					if (m.atoms[a].name == m.atoms[i].name && assign[a] == &md)
						used = true;
				if (used)
					continue;
				assign[i] = &md;
				rec(i + 1);
				assign[i] = nullptr;
			}
		};
		rec(0);
	}
	return total;
}

std::optional<std::string> planeWaveDisprove(const Expression &e)
{
	// divergence-free, inner-transversal mode family; two propagating gauge
	// modes plus constant spectators so that every multilinear sector finds a
	// momentum-conserving assignment
	auto mk = [](std::initializer_list<int> p, std::initializer_list<int> P,
	             std::initializer_list<int> pol, std::initializer_list<int> u) {
		PlaneWaveMode m;
		int k = 0;
		for (int v : p)
			m.p[k++] = Rational(v);
		k = 0;
		for (int v : P)
			m.P[k++] = Rational(v);
		k = 0;
		for (int v : pol)
			m.pol[k++] = Rational(v);
		k = 0;
		for (int v : u)
			m.u[k++] = Rational(v);
		return m;
	};

	std::vector<std::map<std::string, std::vector<PlaneWaveMode>>> configs;
	for (int variant = 0; variant < 3; ++variant)
	{
		std::map<std::string, std::vector<PlaneWaveMode>> cfg;
		std::vector<PlaneWaveMode> aModes = {
		    mk({0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}),
		    mk({0, 0, 1, 0}, {0, 1, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}),
		    mk({0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}),
		    mk({0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}),
		};
		if (variant == 1)
		{
			aModes[0].pol = {Rational(0), Rational(0), Rational(0), Rational(1)};
			aModes[2].u = {Rational(0), Rational(1), Rational(1), Rational(0)};
		}
		cfg["A"] = aModes;
		// parameter / ghost mode balancing the two propagating gauge modes
		PlaneWaveMode par = mk({0, -1, -1, 0}, {-1, -1, 0, 0}, {0, 0, 0, 0}, {1, 1, 0, 0});
		PlaneWaveMode rap = par;
		for (int c = 0; c < 4; ++c)
		{
			rap.p[c] = -par.p[c];
			rap.P[c] = -par.P[c];
		}
		cfg["E"] = {par};
		cfg["w"] = {par};
		if (variant == 2)
		{
			// mirrored pairs so sectors with several single-index fields can
			// find conserving assignments; the polarization is transversal
			// but not null, so pairwise contractions survive
			PlaneWaveMode parT = par, rapT = rap;
			parT.u = {Rational(0), Rational(1), Rational(-1), Rational(0)};
			rapT.u = parT.u;
			cfg["E"] = {parT, rapT};
			cfg["w"] = {rapT};
			cfg["ws"] = {parT};
			cfg["h"] = {parT, rapT};
		}
		PlaneWaveMode unit;
		cfg["theta"] = {unit};
		cfg["thetap"] = {unit};
		configs.push_back(std::move(cfg));
	}

	for (size_t ci = 0; ci < configs.size(); ++ci)
	{
		try
		{
			GaussianRational v = planeWaveEvaluate(e, configs[ci]);
			if (!v.isZero())
				return "nonzero on divergence-free plane-wave configuration " +
				       std::to_string(ci) + ": value " + v.str();
		}
		catch (const ExprError &)
		{
			continue;
		}
	}
	return std::nullopt;
}

} // namespace vpdw
