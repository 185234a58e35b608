#include "vpdw/feynman.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace vpdw {

bool MomentumRegistry::isInner(const std::string &name) const
{
	auto it = inner_.find(name);
	if (it == inner_.end())
		throw ExprError("unregistered momentum '" + name + "'");
	return it->second;
}

namespace {

std::string indexRender(const Index &ix)
{
	std::string s = ix.kind == IndexKind::Spacetime ? "s" : "i";
	s += ix.var == Variance::Upper ? "^" : "_";
	s += ix.isDummy() ? "#" + std::to_string(ix.dummy) : ix.name;
	return s;
}

// one simplification pass; returns false when nothing changed
bool simplifyOnce(MTerm &t)
{
	// locate dummy partners across moms and eta slots
	struct Ref {
		int where; // 0: mom, 1: eta slot 0, 2: eta slot 1
		int pos;
	};
	std::map<int, std::vector<Ref>> pairs;
	for (int i = 0; i < static_cast<int>(t.moms.size()); ++i)
		if (t.moms[i].second.isDummy())
			pairs[t.moms[i].second.dummy].push_back({0, i});
	for (int i = 0; i < static_cast<int>(t.etas.size()); ++i)
	{
		if (t.etas[i].first.isDummy())
			pairs[t.etas[i].first.dummy].push_back({1, i});
		if (t.etas[i].second.isDummy())
			pairs[t.etas[i].second.dummy].push_back({2, i});
	}
	for (auto &[id, refs] : pairs)
	{
		if (refs.size() != 2)
			throw ExprError("malformed contraction in momentum tensor");
		auto a = refs[0], b = refs[1];
		// eta self-trace
		if (a.where != 0 && b.where != 0 && a.pos == b.pos)
		{
			t.coeff *= Rational(4);
			t.etas.erase(t.etas.begin() + a.pos);
			return true;
		}
		// eta-eta merge
		if (a.where != 0 && b.where != 0)
		{
			Index outA = a.where == 1 ? t.etas[a.pos].second : t.etas[a.pos].first;
			Index outB = b.where == 1 ? t.etas[b.pos].second : t.etas[b.pos].first;
			int pa = a.pos, pb = b.pos;
			if (pa > pb)
				std::swap(pa, pb);
			t.etas.erase(t.etas.begin() + pb);
			t.etas.erase(t.etas.begin() + pa);
			t.etas.emplace_back(outA, outB);
			return true;
		}
		// eta-mom relabel
		if (a.where != 0 || b.where != 0)
		{
			if (a.where == 0)
				std::swap(a, b);
			Index out = a.where == 1 ? t.etas[a.pos].second : t.etas[a.pos].first;
			t.moms[b.pos].second = out;
			t.etas.erase(t.etas.begin() + a.pos);
			return true;
		}
		// mom-mom: scalar product
		{
			std::string ma = t.moms[a.pos].first, mb = t.moms[b.pos].first;
			if (ma > mb)
				std::swap(ma, mb);
			int pa = a.pos, pb = b.pos;
			if (pa > pb)
				std::swap(pa, pb);
			t.moms.erase(t.moms.begin() + pb);
			t.moms.erase(t.moms.begin() + pa);
			t.dots[{ma, mb}]++;
			return true;
		}
	}
	return false;
}

void pairDuplicateNames(MTerm &t)
{
	std::map<std::string, std::vector<Index *>> byName;
	int next = 1;
	for (auto &[m, ix] : t.moms)
	{
		if (ix.isDummy())
			next = std::max(next, ix.dummy + 1);
		else
			byName[ix.name].push_back(&ix);
	}
	for (auto &e : t.etas)
		for (Index *ix : {&e.first, &e.second})
		{
			if (ix->isDummy())
				next = std::max(next, ix->dummy + 1);
			else
				byName[ix->name].push_back(ix);
		}
	for (auto &[name, refs] : byName)
	{
		if (refs.size() == 1)
			continue;
		if (refs.size() > 2)
			throw ExprError("index label '" + name + "' occurs more than twice");
		if (refs[0]->kind != refs[1]->kind)
			throw ExprError("index label '" + name + "' contracts across families");
		refs[0]->dummy = refs[1]->dummy = next++;
		refs[0]->name.clear();
		refs[1]->name.clear();
	}
}

std::string termKey(const MTerm &t)
{
	std::ostringstream os;
	os << t.lambdaPow << '|' << t.sym.str() << '|';
	for (auto &[m, ix] : t.moms)
		os << m << indexRender(ix) << ';';
	os << '|';
	for (auto &e : t.etas)
		os << indexRender(e.first) << indexRender(e.second) << ';';
	os << '|';
	for (auto &[k, v] : t.dots)
		os << k.first << '.' << k.second << '^' << v << ';';
	os << '|';
	for (auto &[k, v] : t.epsDenom)
		os << k << '^' << v << ';';
	os << '|';
	for (auto &[k, v] : t.omega)
		os << k << '^' << v << ';';
	return os.str();
}

MTerm canonicalizeTerm(MTerm t)
{
	pairDuplicateNames(t);
	while (simplifyOnce(t))
		;
	for (auto it = t.dots.begin(); it != t.dots.end();)
		it = it->second == 0 ? t.dots.erase(it) : std::next(it);
	// remaining indices are free; order factors deterministically
	auto slotKey = [](const std::pair<Index, Index> &e) {
		std::string a = indexRender(e.first), b = indexRender(e.second);
		return a <= b ? a + b : b + a;
	};
	for (auto &e : t.etas)
		if (indexRender(e.second) < indexRender(e.first))
			std::swap(e.first, e.second);
	std::sort(t.etas.begin(), t.etas.end(),
	          [&](auto &x, auto &y) { return slotKey(x) < slotKey(y); });
	std::sort(t.moms.begin(), t.moms.end(), [](auto &x, auto &y) {
		return std::tie(x.first) != std::tie(y.first)
		           ? x.first < y.first
		           : indexRender(x.second) < indexRender(y.second);
	});
	return t;
}

} // namespace

MomTensor canonicalizeMom(const MomTensor &t, const MomentumRegistry &reg)
{
	(void)reg;
	std::map<std::string, MTerm> merged;
	for (const auto &raw : t.terms)
	{
		if (raw.coeff.isZero())
			continue;
		MTerm c = canonicalizeTerm(raw);
		std::string key = termKey(c);
		auto it = merged.find(key);
		if (it == merged.end())
			merged.emplace(key, std::move(c));
		else
		{
			it->second.coeff += c.coeff;
			if (it->second.coeff.isZero())
				merged.erase(it);
		}
	}
	MomTensor out;
	for (auto &[k, v] : merged)
		out.terms.push_back(std::move(v));
	return out;
}

MomTensor operator+(const MomTensor &a, const MomTensor &b)
{
	MomTensor r = a;
	r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
	return r;
}

MomTensor operator*(const MomTensor &a, const MomTensor &b)
{
	MomTensor r;
	for (const auto &x : a.terms)
		for (const auto &y : b.terms)
		{
			MTerm t;
			t.coeff = x.coeff * y.coeff;
			t.sym = x.sym * y.sym;
			t.lambdaPow = x.lambdaPow + y.lambdaPow;
			t.moms = x.moms;
			// offset y's dummies
			int off = 0;
			for (auto &[m, ix] : x.moms)
				off = std::max(off, ix.dummy);
			for (auto &e : x.etas)
				off = std::max({off, e.first.dummy, e.second.dummy});
			auto shift = [&](Index ix) {
				if (ix.isDummy())
					ix.dummy += off;
				return ix;
			};
			for (auto [m, ix] : y.moms)
				t.moms.emplace_back(m, shift(ix));
			t.etas = x.etas;
			for (auto e : y.etas)
				t.etas.emplace_back(shift(e.first), shift(e.second));
			t.dots = x.dots;
			for (auto &[k, v] : y.dots)
				t.dots[k] += v;
			t.epsDenom = x.epsDenom;
			for (auto &[k, v] : y.epsDenom)
				t.epsDenom[k] += v;
			t.omega = x.omega;
			for (auto &[k, v] : y.omega)
				t.omega[k] += v;
			r.terms.push_back(std::move(t));
		}
	return r;
}

MomTensor momScale(const MomTensor &t, const Rational &c)
{
	MomTensor r = t;
	for (auto &x : r.terms)
		x.coeff *= c;
	return r;
}

bool momEqual(const MomTensor &a, const MomTensor &b, const MomentumRegistry &reg)
{
	return canonicalizeMom(a + momScale(b, Rational(-1)), reg).isZero();
}

std::string momPrint(const MomTensor &t)
{
	if (t.terms.empty())
		return "0";
	std::string s;
	for (size_t i = 0; i < t.terms.size(); ++i)
	{
		const MTerm &x = t.terms[i];
		if (i)
			s += " + ";
		s += x.coeff.str();
		if (!x.sym.isOne())
			s += "*" + x.sym.str();
		if (x.lambdaPow)
			s += "*La^" + std::to_string(x.lambdaPow);
		for (auto &[m, ix] : x.moms)
			s += "*" + m + "[" + indexRender(ix) + "]";
		for (auto &e : x.etas)
			s += "*eta[" + indexRender(e.first) + "," + indexRender(e.second) + "]";
		for (auto &[k, v] : x.dots)
			s += "*(" + k.first + "." + k.second + ")^" + std::to_string(v);
		for (auto &[k, v] : x.epsDenom)
			s += "*(" + k + "^2-ieps)^-" + std::to_string(v);
		for (auto &[k, v] : x.omega)
			s += "*Omega_" + std::to_string(k) + (v == 1 ? "" : "^" + std::to_string(v));
	}
	return s;
}

std::vector<int> momScaleWeights(const MomTensor &t, const MomentumRegistry &reg)
{
	std::vector<int> out;
	for (const auto &x : t.terms)
	{
		int w = x.lambdaPow;
		for (auto &[m, ix] : x.moms)
		{
			(void)ix;
			if (reg.isInner(m))
				w -= 1;
		}
		for (auto &[k, v] : x.dots)
		{
			bool ia = reg.isInner(k.first), ib = reg.isInner(k.second);
			if (ia != ib)
				throw ExprError("scalar product mixes momentum families");
			if (ia)
				w -= 2 * v;
		}
		out.push_back(w);
	}
	return out;
}

namespace {

MomTensor momFactor(const MomCombo &combo, const Index &ix)
{
	MomTensor r;
	for (auto &[name, c] : combo)
	{
		if (c.isZero())
			continue;
		MTerm t;
		t.coeff = c;
		t.moms.emplace_back(name, ix);
		r.terms.push_back(std::move(t));
	}
	return r;
}

MomTensor etaFactor(const Index &a, const Index &b)
{
	MTerm t;
	t.etas.emplace_back(a, b);
	MomTensor r;
	r.terms.push_back(std::move(t));
	return r;
}

MomTensor one()
{
	MomTensor r;
	r.terms.push_back(MTerm{});
	return r;
}

Index up(const std::string &n, IndexKind k = IndexKind::Inner)
{
	return Index::ext(k, Variance::Upper, n);
}
Index dn(const std::string &n, IndexKind k = IndexKind::Spacetime)
{
	return Index::ext(k, Variance::Lower, n);
}

MomCombo comboNeg(const MomCombo &c)
{
	MomCombo r;
	for (auto &[n, v] : c)
		r[n] = -v;
	return r;
}
MomCombo comboAdd(const MomCombo &a, const MomCombo &b)
{
	MomCombo r = a;
	for (auto &[n, v] : b)
	{
		r[n] += v;
		if (r[n].isZero())
			r.erase(n);
	}
	for (auto it = r.begin(); it != r.end();)
		it = it->second.isZero() ? r.erase(it) : std::next(it);
	return r;
}
std::string comboRender(const MomCombo &c)
{
	std::string s;
	for (auto &[n, v] : c)
	{
		if (!s.empty())
			s += v.isNegative() ? "" : "+";
		s += v.isOne() ? n : (v == Rational(-1) ? "-" + n : v.str() + "*" + n);
	}
	return s.empty() ? "0" : s;
}

void checkConservation(const std::string &what, const std::vector<MomCombo> &ps,
                       const std::vector<MomCombo> &Ps)
{
	MomCombo sp, sP;
	for (auto &c : ps)
		sp = comboAdd(sp, c);
	for (auto &c : Ps)
		sP = comboAdd(sP, c);
	if (!sp.empty() || !sP.empty())
		throw ExprError("momentum conservation violated at " + what +
		                ": residual spacetime " + comboRender(sp) + ", inner " +
		                comboRender(sP));
}

} // namespace

MomTensor gaugePropagator(const std::string &p, const std::string &P,
                          const std::string &mu, const std::string &nu,
                          const std::string &al, const std::string &be,
                          ProjectorMode mode, std::optional<Rational> xiValue)
{
	if (xiValue && xiValue->isZero())
		throw ExprError("the propagator is not defined at vanishing gauge parameter");

	// spacetime part: eta_{mu nu} - (1 - xi) p_mu p_nu / p^2
	MomTensor st = etaFactor(dn(mu), dn(nu));
	MomTensor pp = momFactor({{p, Rational(1)}}, dn(mu)) *
	               momFactor({{p, Rational(1)}}, dn(nu));
	for (auto &t : pp.terms)
		t.dots[{p, p}] -= 1;
	if (xiValue)
		st = st + momScale(pp, *xiValue - Rational(1));
	else
	{
		st = st + momScale(pp, Rational(-1));
		MomTensor xiPart = pp;
		for (auto &t : xiPart.terms)
			t.sym = t.sym * SymProd("xi");
		st = st + xiPart;
	}

	// inner part: eta^{al be} - P^al P^be / P^2
	MomTensor in = etaFactor(up(al), up(be));
	if (mode == ProjectorMode::Full)
	{
		MomTensor PP = momFactor({{P, Rational(1)}}, up(al)) *
		               momFactor({{P, Rational(1)}}, up(be));
		for (auto &t : PP.terms)
			t.dots[{P, P}] -= 1;
		in = in + momScale(PP, Rational(-1));
	}

	MomTensor r = st * in;
	for (auto &t : r.terms)
		t.epsDenom[p] += 1;
	return canonicalizeMom(r, MomentumRegistry{});
}

MomTensor ghostPropagator(const std::string &p, const std::string &P,
                          const std::string &ga, const std::string &de,
                          ProjectorMode mode)
{
	MomTensor in = etaFactor(up(ga), up(de));
	if (mode == ProjectorMode::Full)
	{
		MomTensor PP = momFactor({{P, Rational(1)}}, up(ga)) *
		               momFactor({{P, Rational(1)}}, up(de));
		for (auto &t : PP.terms)
			t.dots[{P, P}] -= 1;
		in = in + momScale(PP, Rational(-1));
	}
	for (auto &t : in.terms)
		t.epsDenom[p] += 1;
	return canonicalizeMom(in, MomentumRegistry{});
}

MomTensor vertexAAA(const std::array<VertexLeg, 3> &legs)
{
	checkConservation("three-boson vertex", {legs[0].p, legs[1].p, legs[2].p},
	                  {legs[0].P, legs[1].P, legs[2].P});
	const std::string &mu = legs[0].mu, &nu = legs[1].mu, &rho = legs[2].mu;
	const std::string &al = legs[0].al, &be = legs[1].al, &ga = legs[2].al;

	auto line = [&](const MomCombo &Pfirst, const std::string &ia, const std::string &ib,
	                const std::string &ic, const MomCombo &pSecond,
	                const std::string &m1, const std::string &m2, const std::string &m3,
	                const std::string &m4, const std::string &m5,
	                const std::string &m6) {
		// -2 La Pfirst^{ic} eta^{ia ib} (p_{m1} eta_{m2 m3} - p_{m4} eta_{m5 m6})
		MomTensor inn = momFactor(Pfirst, up(ic)) * etaFactor(up(ia), up(ib));
		MomTensor sp1 = momFactor(pSecond, dn(m1)) * etaFactor(dn(m2), dn(m3));
		MomTensor sp2 = momFactor(pSecond, dn(m4)) * etaFactor(dn(m5), dn(m6));
		MomTensor r = inn * (sp1 + momScale(sp2, Rational(-1)));
		r = momScale(r, Rational(-2));
		for (auto &t : r.terms)
			t.lambdaPow += 1;
		return r;
	};
	MomTensor v = line(legs[0].P, al, be, ga, legs[1].p, rho, mu, nu, mu, nu, rho);
	v = v + line(legs[1].P, be, ga, al, legs[2].p, mu, nu, rho, nu, rho, mu);
	v = v + line(legs[2].P, ga, al, be, legs[0].p, nu, rho, mu, rho, mu, nu);
	return v;
}

MomTensor vertexAAAA(const std::array<VertexLeg, 4> &legs)
{
	checkConservation("four-boson vertex",
	                  {legs[0].p, legs[1].p, legs[2].p, legs[3].p},
	                  {legs[0].P, legs[1].P, legs[2].P, legs[3].P});
	const std::string &mu = legs[0].mu, &nu = legs[1].mu, &rho = legs[2].mu,
	                  &si = legs[3].mu;
	const std::string &al = legs[0].al, &be = legs[1].al, &ga = legs[2].al,
	                  &de = legs[3].al;

	auto pair = [&](const MomCombo &Pa, const std::string &ia, const MomCombo &Pb,
	                const std::string &ib, const std::string &ea, const std::string &eb) {
		MomTensor r = momFactor(Pa, up(ia)) * momFactor(Pb, up(ib)) *
		              etaFactor(up(ea), up(eb));
		for (auto &t : r.terms)
			t.lambdaPow += 2;
		return r;
	};
	auto spacetime = [&](const std::string &a, const std::string &b, const std::string &c,
	                     const std::string &d, const std::string &e, const std::string &f,
	                     const std::string &g, const std::string &h) {
		return etaFactor(dn(a), dn(b)) * etaFactor(dn(c), dn(d)) +
		       momScale(etaFactor(dn(e), dn(f)) * etaFactor(dn(g), dn(h)), Rational(-1));
	};

	// first group
	MomTensor g1 = pair(legs[0].P, ga, legs[1].P, de, al, be) +
	               momScale(pair(legs[1].P, de, legs[2].P, al, be, ga), Rational(-1)) +
	               pair(legs[2].P, al, legs[3].P, be, ga, de) +
	               momScale(pair(legs[0].P, ga, legs[3].P, be, al, de), Rational(-1));
	MomTensor v = momScale(g1 * spacetime(mu, nu, rho, si, mu, si, nu, rho), Rational(-1));

	// second group
	MomTensor g2 = pair(legs[0].P, de, legs[1].P, ga, al, be) +
	               momScale(pair(legs[0].P, de, legs[2].P, be, al, ga), Rational(-1)) +
	               pair(legs[2].P, be, legs[3].P, al, ga, de) +
	               momScale(pair(legs[1].P, ga, legs[3].P, al, be, de), Rational(-1));
	v = v + momScale(g2 * spacetime(mu, nu, rho, si, mu, rho, nu, si), Rational(-1));

	// third group
	MomTensor g3 = pair(legs[0].P, be, legs[2].P, de, al, ga) +
	               momScale(pair(legs[0].P, be, legs[3].P, ga, al, de), Rational(-1)) +
	               pair(legs[1].P, al, legs[3].P, ga, be, de) +
	               momScale(pair(legs[1].P, al, legs[2].P, de, be, ga), Rational(-1));
	v = v + momScale(g3 * spacetime(mu, rho, nu, si, mu, si, nu, rho), Rational(-1));
	return v;
}

MomTensor vertexGhostA(const std::array<VertexLeg, 3> &legs, GhostVertexVariant variant)
{
	checkConservation("ghost-gauge vertex", {legs[0].p, legs[1].p, legs[2].p},
	                  {legs[0].P, legs[1].P, legs[2].P});
	const std::string &ga = legs[0].al; // outgoing ghost
	const std::string &de = legs[1].al; // incoming ghost
	const std::string &mu = legs[2].mu, &al = legs[2].al;

	MomTensor t1 = momFactor(legs[1].P, up(al)) * etaFactor(up(ga), up(de));
	// second term: as printed the metric carries a dangling label; the
	// index-consistent reading closes it onto the outgoing ghost index
	MomTensor t2 =
	    momFactor(legs[2].P, up(de)) *
	    (variant == GhostVertexVariant::AsPrinted
	         ? etaFactor(up(al), up("dangling_" + ga))
	         : etaFactor(up(al), up(ga)));
	MomTensor r = (t1 + momScale(t2, Rational(-1))) * momFactor(legs[0].p, dn(mu));
	r = momScale(r, Rational(-1));
	for (auto &t : r.terms)
		t.lambdaPow += 1;
	return r;
}

std::map<std::vector<int>, Rational>
evaluateComponents(const MomTensor &tin, const std::map<std::string, Vec4> &values,
                   const std::vector<std::string> &freeOrder, const MomentumRegistry &reg)
{
	MomTensor t = canonicalizeMom(tin, reg);
	std::map<std::vector<int>, Rational> out;
	auto etaDiag = [](int c) { return c == 0 ? Rational(-1) : Rational(1); };

	for (const auto &x : t.terms)
	{
		if (!x.sym.isOne() || !x.epsDenom.empty() || !x.omega.empty())
			throw ExprError("component evaluation of a non-polynomial tensor");
		// scalar factors
		Rational base = x.coeff;
		for (auto &[k, v] : x.dots)
		{
			Rational d(0);
			const Vec4 &a = values.at(k.first);
			const Vec4 &b = values.at(k.second);
			for (int c = 0; c < 4; ++c)
				d += etaDiag(c) * a[c] * b[c];
			if (v < 0)
			{
				if (d.isZero())
					throw ExprError("vanishing scalar product in a denominator");
				for (int i = 0; i < -v; ++i)
					base /= d;
			}
			else
				for (int i = 0; i < v; ++i)
					base *= d;
		}
		// assign components to the free indices
		std::map<std::string, int> pos;
		for (size_t i = 0; i < freeOrder.size(); ++i)
			pos[freeOrder[i]] = static_cast<int>(i);
		std::vector<int> comp(freeOrder.size(), 0);
		while (true)
		{
			Rational val = base;
			for (auto &[m, ix] : x.moms)
			{
				if (ix.isDummy())
					throw ExprError("unexpected contraction after canonicalization");
				int c = comp[pos.at(ix.name)];
				Rational v = values.at(m)[c];
				if (ix.var == Variance::Lower)
					v *= etaDiag(c);
				val *= v;
			}
			for (auto &e : x.etas)
			{
				int ca = comp[pos.at(e.first.name)];
				int cb = comp[pos.at(e.second.name)];
				if (ca != cb)
				{
					val = Rational(0);
					break;
				}
				if (e.first.var == e.second.var)
					val *= etaDiag(ca);
			}
			if (!val.isZero())
			{
				auto &slot = out[comp];
				slot += val;
				if (slot.isZero())
					out.erase(comp);
			}
			size_t j = 0;
			for (; j < comp.size(); ++j)
			{
				if (++comp[j] < 4)
					break;
				comp[j] = 0;
			}
			if (j == comp.size())
				break;
		}
	}
	return out;
}

MomTensor symEtaTensor(const std::vector<std::string> &indexNames)
{
	size_t n = indexNames.size();
	if (n % 2)
		throw ExprError("symmetrized metric tensor needs an even rank");
	MomTensor out;
	std::function<void(std::vector<int>, MTerm)> rec = [&](std::vector<int> left, MTerm acc) {
		if (left.empty())
		{
			out.terms.push_back(acc);
			return;
		}
		int a = left.front();
		for (size_t i = 1; i < left.size(); ++i)
		{
			int b = left[i];
			std::vector<int> rest;
			for (size_t j = 1; j < left.size(); ++j)
				if (j != i)
					rest.push_back(left[j]);
			MTerm t = acc;
			t.etas.emplace_back(up(indexNames[a]), up(indexNames[b]));
			rec(rest, t);
		}
	};
	std::vector<int> all(n);
	for (size_t i = 0; i < n; ++i)
		all[i] = static_cast<int>(i);
	rec(all, MTerm{});
	return out;
}

Rational symEtaFullTrace(int k)
{
	// contract the pairing sum with the reference pairing (01)(23)...; each
	// pairing contributes 4^{#cycles}
	std::vector<std::string> names;
	for (int i = 0; i < 2 * k; ++i)
		names.push_back("c" + std::to_string(i / 2) + (i % 2 ? "b" : "a"));
	MomTensor sym = symEtaTensor(names);
	Rational total(0);
	for (auto &t : sym.terms)
	{
		// close with the reference pairing: identify c{i}a with c{i}b
		std::map<std::string, int> link;
		std::vector<std::pair<int, int>> pairs;
		for (auto &e : t.etas)
			pairs.emplace_back(std::stoi(e.first.name.substr(1, e.first.name.size() - 2)) * 2 +
			                       (e.first.name.back() == 'b'),
			                   std::stoi(e.second.name.substr(1, e.second.name.size() - 2)) * 2 +
			                       (e.second.name.back() == 'b'));
		std::vector<int> mate(2 * k);
		for (auto &[a, b] : pairs)
		{
			mate[a] = b;
			mate[b] = a;
		}
		auto ref = [&](int i) { return i ^ 1; };
		std::vector<char> seen(2 * k, 0);
		int cycles = 0;
		for (int s = 0; s < 2 * k; ++s)
		{
			if (seen[s])
				continue;
			++cycles;
			int c = s;
			while (!seen[c])
			{
				seen[c] = 1;
				seen[mate[c]] = 1;
				c = ref(mate[c]);
			}
		}
		Rational v(1);
		for (int i = 0; i < cycles; ++i)
			v *= Rational(4);
		total += v;
	}
	return total;
}

MomTensor reduceInner(const MomTensor &tin, const std::string &loop,
                      const MomentumRegistry &reg)
{
	MomTensor t = canonicalizeMom(tin, reg);
	if (!reg.isInner(loop))
		throw ExprError("loop reduction applies to inner momenta");
	MomTensor out;
	for (const auto &xin : t.terms)
	{
		// scalar products with other momenta are re-expanded into vector
		// pairs so their loop factors join the monomial
		MTerm x = xin;
		{
			int fresh = 1;
			for (auto &[m, ix] : x.moms)
				fresh = std::max(fresh, ix.dummy + 1);
			for (auto &e : x.etas)
				fresh = std::max({fresh, e.first.dummy + 1, e.second.dummy + 1});
			std::map<std::pair<std::string, std::string>, int> dots = x.dots;
			for (auto &[k, n] : dots)
			{
				bool hasLoop = k.first == loop || k.second == loop;
				bool pure = k.first == loop && k.second == loop;
				if (!hasLoop || pure)
					continue;
				if (n < 0)
					throw ExprError("inverse mixed scalar product with the loop momentum");
				x.dots.erase(k);
				std::string other = k.first == loop ? k.second : k.first;
				for (int i = 0; i < n; ++i)
				{
					x.moms.emplace_back(loop,
					                    Index::dum(IndexKind::Inner, Variance::Upper, fresh));
					x.moms.emplace_back(other,
					                    Index::dum(IndexKind::Inner, Variance::Lower, fresh));
					++fresh;
				}
			}
		}

		// collect the loop dependence
		std::vector<Index> loopIdx;
		MTerm rest = x;
		rest.moms.clear();
		for (auto &[m, ix] : x.moms)
		{
			if (m == loop)
				loopIdx.push_back(ix);
			else
				rest.moms.emplace_back(m, ix);
		}
		int j = 0;
		for (auto it = rest.dots.begin(); it != rest.dots.end();)
		{
			if (it->first.first == loop && it->first.second == loop)
			{
				j = it->second;
				it = rest.dots.erase(it);
			}
			else
				++it;
		}
		if (rest.epsDenom.count(loop))
			throw ExprError("non-polynomial loop dependence");
		if (j < 0)
			throw ExprError("inverse powers of the loop momentum are not reducible");

		int r = static_cast<int>(loopIdx.size());
		if (r % 2)
			continue; // odd rank integrates to zero
		int k = j + r / 2;
		// normalization: full contraction reproduces (-1)^k Omega_k
		Rational c = Rational(1) / symEtaFullTrace(r / 2);
		if (k % 2)
			c = -c;
		rest.coeff *= c;
		rest.omega[k] += 1;
		if (r == 0)
		{
			out.terms.push_back(rest);
			continue;
		}
		// symmetrized pairings over the loop indices
		std::vector<std::string> names;
		std::map<std::string, Index> realIdx;
		for (int i = 0; i < r; ++i)
		{
			std::string nm = "redu" + std::to_string(i);
			names.push_back(nm);
			realIdx[nm] = loopIdx[i];
		}
		MomTensor sym = symEtaTensor(names);
		for (auto &st : sym.terms)
		{
			MTerm t2 = rest;
			for (auto e : st.etas)
			{
				Index a = realIdx.at(e.first.name);
				Index b = realIdx.at(e.second.name);
				t2.etas.emplace_back(a, b);
			}
			out.terms.push_back(std::move(t2));
		}
	}
	return canonicalizeMom(out, reg);
}

// ---- diagrams ---------------------------------------------------------------

namespace {

MomCombo comboFromJson(const nlohmann::json &j)
{
	MomCombo c;
	for (auto it = j.begin(); it != j.end(); ++it)
	{
		const auto &v = it.value();
		if (v.is_number_integer())
			c[it.key()] = Rational(v.get<int64_t>());
		else
			throw ExprError("momentum coefficients must be integers");
	}
	return c;
}

} // namespace

Diagram diagramFromJson(const std::string &jsonText)
{
	nlohmann::json j = nlohmann::json::parse(jsonText);
	Diagram d;
	if (j.contains("projector"))
		d.projector = j["projector"] == "full" ? ProjectorMode::Full
		                                       : ProjectorMode::Simplified;
	if (j.contains("ghost_vertex"))
		d.ghostVariant = j["ghost_vertex"] == "as_printed"
		                     ? GhostVertexVariant::AsPrinted
		                     : GhostVertexVariant::IndexConsistent;
	for (auto &l : j.value("loops", nlohmann::json::array()))
		d.loops.push_back(l.get<std::string>());
	for (auto &e : j.at("edges"))
	{
		Diagram::Edge ed;
		ed.species = e.at("species").get<std::string>();
		ed.p = comboFromJson(e.at("p"));
		ed.P = comboFromJson(e.at("P"));
		d.edges.push_back(std::move(ed));
	}
	for (auto &v : j.at("vertices"))
	{
		Diagram::Vertex vx;
		vx.kind = v.at("kind").get<std::string>();
		for (auto &leg : v.at("legs"))
		{
			if (leg.contains("edge"))
			{
				int e = leg.at("edge").get<int>();
				bool from = leg.value("end", "to") == std::string("from");
				vx.legEdge.push_back(e);
				const auto &ed = d.edges.at(e);
				vx.legP.push_back(from ? comboNeg(ed.p) : ed.p);
				vx.legPP.push_back(from ? comboNeg(ed.P) : ed.P);
				std::string id = "e" + std::to_string(e);
				if (ed.species == "ghost")
				{
					vx.extMu.push_back("");
					vx.extAl.push_back(from ? id + "ga" : id + "de");
				}
				else
				{
					vx.extMu.push_back(from ? id + "mu" : id + "nu");
					vx.extAl.push_back(from ? id + "al" : id + "be");
				}
			}
			else
			{
				vx.legEdge.push_back(-1);
				vx.legP.push_back(comboFromJson(leg.at("p")));
				vx.legPP.push_back(comboFromJson(leg.at("P")));
				vx.extMu.push_back(leg.value("mu", ""));
				vx.extAl.push_back(leg.value("al", ""));
			}
		}
		d.vertices.push_back(std::move(vx));
	}
	return d;
}

ContractionResult contractDiagram(const Diagram &d)
{
	ContractionResult res;
	// register momenta
	auto reg = [&](const MomCombo &c, bool inner) {
		for (auto &[n, v] : c)
		{
			(void)v;
			res.registry.add(n, inner);
		}
	};
	for (auto &v : d.vertices)
	{
		for (auto &c : v.legP)
			reg(c, false);
		for (auto &c : v.legPP)
			reg(c, true);
	}
	for (auto &e : d.edges)
	{
		reg(e.p, false);
		reg(e.P, true);
	}
	res.loops = d.loops;

	MomTensor total = one();
	// vertices
	for (size_t vi = 0; vi < d.vertices.size(); ++vi)
	{
		const auto &v = d.vertices[vi];
		auto leg = [&](size_t k) {
			VertexLeg l;
			l.p = v.legP.at(k);
			l.P = v.legPP.at(k);
			l.mu = v.extMu.at(k);
			l.al = v.extAl.at(k);
			return l;
		};
		try
		{
			if (v.kind == "AAA")
				total = total * vertexAAA({leg(0), leg(1), leg(2)});
			else if (v.kind == "AAAA")
				total = total * vertexAAAA({leg(0), leg(1), leg(2), leg(3)});
			else if (v.kind == "ghostA")
				total = total * vertexGhostA({leg(0), leg(1), leg(2)}, d.ghostVariant);
			else
				throw ExprError("unknown vertex kind '" + v.kind + "'");
		}
		catch (const ExprError &err)
		{
			throw ExprError(std::string(err.what()) + " (vertex " + std::to_string(vi) +
			                ")");
		}
	}
	// propagators; the denominator is a formal tag keyed by the edge momentum
	for (size_t ei = 0; ei < d.edges.size(); ++ei)
	{
		const auto &e = d.edges[ei];
		std::string id = "e" + std::to_string(ei);
		std::string pTag = comboRender(e.p);
		if (d.projector == ProjectorMode::Full && (e.p.size() != 1 || e.P.size() != 1))
			throw ExprError("the full projector needs single-name edge momenta");
		if (e.species == "gauge")
		{
			// Feynman gauge spacetime part with the chosen inner projector
			MomTensor prop = etaFactor(dn(id + "mu"), dn(id + "nu"));
			MomTensor in = etaFactor(up(id + "al"), up(id + "be"));
			if (d.projector == ProjectorMode::Full)
			{
				std::string P = e.P.begin()->first;
				MomTensor PP = momFactor({{P, Rational(1)}}, up(id + "al")) *
				               momFactor({{P, Rational(1)}}, up(id + "be"));
				for (auto &t : PP.terms)
					t.dots[{P, P}] -= 1;
				in = in + momScale(PP, Rational(-1));
			}
			prop = prop * in;
			for (auto &t : prop.terms)
				t.epsDenom[pTag] += 1;
			total = total * prop;
		}
		else if (e.species == "ghost")
		{
			MomTensor in = etaFactor(up(id + "ga"), up(id + "de"));
			if (d.projector == ProjectorMode::Full)
			{
				std::string P = e.P.begin()->first;
				MomTensor PP = momFactor({{P, Rational(1)}}, up(id + "ga")) *
				               momFactor({{P, Rational(1)}}, up(id + "de"));
				for (auto &t : PP.terms)
					t.dots[{P, P}] -= 1;
				in = in + momScale(PP, Rational(-1));
			}
			for (auto &t : in.terms)
				t.epsDenom[pTag] += 1;
			total = total * in;
		}
		else
			throw ExprError("unknown edge species '" + e.species + "'");
	}
	res.tensor = canonicalizeMom(total, res.registry);
	return res;
}

} // namespace vpdw
