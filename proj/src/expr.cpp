#include "vpdw/expr.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace vpdw {

const SpeciesInfo &speciesInfo(Species s)
{
	// printName, odd, 2*dim, ghost, #st idx, #in idx, constInner, constSpacetime,
	// sortRank, pivotRank
	static const SpeciesInfo table[] = {
	    {"theta", true, -2, -1, 0, 0, true, true, 0, 9},   // Theta
	    {"E", false, 0, 0, 0, 1, false, false, 1, 8},      // GaugeParam
	    {"Ep", false, 0, 0, 0, 1, false, false, 2, 7},     // ResidualParam
	    {"W", false, 0, 0, 0, 2, true, false, 3, 6},       // InnerRotation
	    {"T", false, 0, 0, 0, -1, true, true, 4, 5},       // ConstTensor
	    {"h", false, 4, 0, 0, 1, false, false, 5, 0},      // NL
	    {"A", false, 2, 0, 1, 1, false, false, 6, 2},      // GaugeA
	    {"ws", true, 2, -1, 0, 1, false, false, 7, 1},     // AntiGhost
	    {"w", true, 2, 1, 0, 1, false, false, 8, 3},       // Ghost
	    {"psi", true, 3, 0, 0, 0, false, false, 9, 4},     // Matter
	};
	return table[static_cast<size_t>(s)];
}

bool speciesNeedsDivergenceConstraint(Species s)
{
	switch (s)
	{
	case Species::GaugeA:
	case Species::Ghost:
	case Species::AntiGhost:
	case Species::NL:
	case Species::GaugeParam:
		return true;
	default:
		return false;
	}
}

Atom makeAtom(Species s, std::vector<Index> idx)
{
	Atom a;
	a.species = s;
	a.name = speciesInfo(s).printName;
	a.idx = std::move(idx);
	const auto &info = speciesInfo(s);
	if (info.nInnerIdx >= 0)
	{
		size_t expect = static_cast<size_t>(info.nSpacetimeIdx + info.nInnerIdx);
		if (a.idx.size() != expect)
			throw ExprError(std::string("atom ") + a.name + ": wrong index count");
	}
	return a;
}

Expression atomExpr(Atom a, Rational c, SymProd s)
{
	Monomial m;
	m.coeff = std::move(c);
	m.sym = std::move(s);
	m.atoms.push_back(std::move(a));
	Expression e;
	e.terms.push_back(std::move(m));
	return canonicalize(e);
}

Expression constantExpr(Rational c, SymProd s)
{
	Monomial m;
	m.coeff = std::move(c);
	m.sym = std::move(s);
	Expression e;
	e.terms.push_back(std::move(m));
	return canonicalize(e);
}

int maxDummyId(const Monomial &m)
{
	int mx = 0;
	auto scan = [&](const std::vector<Index> &v) {
		for (auto &i : v)
			mx = std::max(mx, i.dummy);
	};
	for (auto &a : m.atoms)
	{
		scan(a.idx);
		scan(a.dst);
		scan(a.din);
	}
	return mx;
}

namespace {

// slot reference inside a monomial: atom position, list (0 own / 1 dst / 2 din),
// position in list
struct SlotRef {
	int atom, list, pos;
};

std::vector<Index> &listOf(Atom &a, int list)
{
	return list == 0 ? a.idx : (list == 1 ? a.dst : a.din);
}
const std::vector<Index> &listOf(const Atom &a, int list)
{
	return list == 0 ? a.idx : (list == 1 ? a.dst : a.din);
}

// Pair repeated external labels into fresh dummies; validate arities.
Monomial pairDuplicates(Monomial m)
{
	std::map<std::string, std::vector<SlotRef>> byName;
	std::map<int, int> dummyCount;
	int nextId = maxDummyId(m) + 1;
	for (int ai = 0; ai < static_cast<int>(m.atoms.size()); ++ai)
	{
		for (int li = 0; li < 3; ++li)
		{
			auto &lst = listOf(m.atoms[ai], li);
			for (int pi = 0; pi < static_cast<int>(lst.size()); ++pi)
			{
				Index &ix = lst[pi];
				if (li == 1 && ix.kind != IndexKind::Spacetime)
					throw ExprError("spacetime derivative with inner index");
				if (li == 2 && ix.kind != IndexKind::Inner)
					throw ExprError("inner derivative with spacetime index");
				if (ix.isDummy())
					dummyCount[ix.dummy]++;
				else
					byName[ix.name].push_back({ai, li, pi});
			}
		}
	}
	for (auto &[id, n] : dummyCount)
		if (n != 2)
			throw ExprError("contracted index pair " + std::to_string(id) +
			                " occurs " + std::to_string(n) + " times");
	for (auto &[name, slots] : byName)
	{
		if (slots.size() == 1)
			continue;
		if (slots.size() > 2)
			throw ExprError("index label '" + name + "' occurs more than twice in a monomial");
		Index &a = listOf(m.atoms[slots[0].atom], slots[0].list)[slots[0].pos];
		Index &b = listOf(m.atoms[slots[1].atom], slots[1].list)[slots[1].pos];
		if (a.kind != b.kind)
			throw ExprError("index label '" + name + "' contracts spacetime with inner");
		a.dummy = b.dummy = nextId++;
		a.name.clear();
		b.name.clear();
	}
	return m;
}

// relabeling-invariant signature of an index for the weak sort key
void sigIndex(std::ostringstream &os, const Index &ix)
{
	os << (ix.kind == IndexKind::Spacetime ? 's' : 'i');
	if (ix.isDummy())
		os << "?";
	else
		os << (ix.var == Variance::Upper ? '^' : '_') << ix.name;
	os << ';';
}

std::string weakKey(const Atom &a)
{
	std::ostringstream os;
	os << speciesInfo(a.species).sortRank << '|' << a.name << '|';
	for (auto &ix : a.idx)
		sigIndex(os, ix);
	os << '|';
	for (int li = 1; li <= 2; ++li)
	{
		std::vector<std::string> sigs;
		for (auto &ix : listOf(a, li))
		{
			std::ostringstream t;
			sigIndex(t, ix);
			sigs.push_back(t.str());
		}
		std::sort(sigs.begin(), sigs.end());
		for (auto &s : sigs)
			os << s;
		os << '|';
	}
	return os.str();
}

// permutation parity restricted to odd atoms
int grassmannSign(const std::vector<int> &perm, const std::vector<char> &odd)
{
	int sign = 1;
	for (size_t i = 0; i < perm.size(); ++i)
		for (size_t j = i + 1; j < perm.size(); ++j)
			if (perm[i] > perm[j] && odd[perm[i]] && odd[perm[j]])
				sign = -sign;
	return sign;
}

struct Arrangement {
	std::vector<int> order;                    // atom positions in original monomial
	std::vector<std::vector<int>> dstOrder;    // per ordered atom
	std::vector<std::vector<int>> dinOrder;
	std::vector<char> swapRot;                 // antisymmetric slot swap per ordered atom
};

// Encode an arrangement: renumber dummies by first occurrence, normalize dummy
// variance (first upper), serialize. Also builds the concrete atom list.
std::string encodeArrangement(const Monomial &m, const Arrangement &ar,
                              std::vector<Atom> *rebuilt)
{
	std::map<int, int> renum;
	std::map<int, Variance> firstVar;
	int next = 1;
	std::ostringstream os;
	if (rebuilt)
		rebuilt->clear();
	for (size_t k = 0; k < ar.order.size(); ++k)
	{
		const Atom &a = m.atoms[ar.order[k]];
		Atom out;
		out.species = a.species;
		out.name = a.name;
		auto emit = [&](Index ix) {
			if (ix.isDummy())
			{
				auto it = renum.find(ix.dummy);
				if (it == renum.end())
				{
					renum.emplace(ix.dummy, next);
					ix.dummy = next++;
					ix.var = Variance::Upper;
				}
				else
				{
					ix.dummy = it->second;
					ix.var = Variance::Lower;
				}
			}
			os << (ix.kind == IndexKind::Spacetime ? 's' : 'i');
			if (ix.isDummy())
				os << '#' << ix.dummy;
			else
				os << (ix.var == Variance::Upper ? '^' : '_') << ix.name;
			os << ';';
			return ix;
		};
		os << speciesInfo(a.species).sortRank << '|' << a.name << '|';
		std::vector<Index> own = a.idx;
		if (ar.swapRot[k] && own.size() == 2)
			std::swap(own[0], own[1]);
		for (auto &ix : own)
			out.idx.push_back(emit(ix));
		os << '|';
		for (int pi : ar.dstOrder[k])
			out.dst.push_back(emit(a.dst[pi]));
		os << '|';
		for (int pi : ar.dinOrder[k])
			out.din.push_back(emit(a.din[pi]));
		os << '@';
		if (rebuilt)
			rebuilt->push_back(std::move(out));
	}
	return os.str();
}

// all orders of a derivative list: externals first (sorted), dummy entries permuted
std::vector<std::vector<int>> derivOrders(const std::vector<Index> &lst)
{
	std::vector<int> ext, dums;
	for (int i = 0; i < static_cast<int>(lst.size()); ++i)
		(lst[i].isDummy() ? dums : ext).push_back(i);
	std::sort(ext.begin(), ext.end(), [&](int a, int b) {
		return std::tie(lst[a].name, lst[a].var) < std::tie(lst[b].name, lst[b].var);
	});
	std::vector<std::vector<int>> out;
	std::sort(dums.begin(), dums.end());
	do
	{
		std::vector<int> o = ext;
		o.insert(o.end(), dums.begin(), dums.end());
		out.push_back(std::move(o));
	} while (std::next_permutation(dums.begin(), dums.end()));
	return out;
}

} // namespace

std::optional<Monomial> canonicalizeMonomial(const Monomial &min, std::string *keyOut)
{
	if (min.coeff.isZero())
		return std::nullopt;
	Monomial m = pairDuplicates(min);

	int n = static_cast<int>(m.atoms.size());
	std::vector<char> odd(n);
	for (int i = 0; i < n; ++i)
		odd[i] = m.atoms[i].odd();

	// base order: stable sort by weak key
	std::vector<std::string> keys(n);
	for (int i = 0; i < n; ++i)
		keys[i] = weakKey(m.atoms[i]);
	std::vector<int> base(n);
	for (int i = 0; i < n; ++i)
		base[i] = i;
	std::stable_sort(base.begin(), base.end(),
	                 [&](int a, int b) { return keys[a] < keys[b]; });

	// tie groups of equal weak key
	std::vector<std::pair<int, int>> groups; // [begin,end)
	for (int i = 0; i < n;)
	{
		int j = i;
		while (j < n && keys[base[j]] == keys[base[i]])
			++j;
		groups.emplace_back(i, j);
		i = j;
	}

	// per-atom derivative orders and rotation swaps
	std::vector<std::vector<std::vector<int>>> dstOpts(n), dinOpts(n);
	std::vector<int> swapOpts(n, 1);
	for (int i = 0; i < n; ++i)
	{
		dstOpts[i] = derivOrders(m.atoms[i].dst);
		dinOpts[i] = derivOrders(m.atoms[i].din);
		if (m.atoms[i].species == Species::InnerRotation)
			swapOpts[i] = 2;
	}

	std::string bestKey;
	std::vector<Atom> bestAtoms;
	int bestSign = 0;
	bool signConflict = false;

	std::vector<int> order = base;
	// enumerate permutations within each tie group
	std::vector<std::vector<int>> groupPerm;
	for (auto &[b, e] : groups)
	{
		std::vector<int> g(order.begin() + b, order.begin() + e);
		std::sort(g.begin(), g.end());
		groupPerm.push_back(g);
	}

	size_t explored = 0;
	const size_t cap = 2000000;

	std::function<void(size_t)> exploreGroups = [&](size_t gi) {
		if (gi == groups.size())
		{
			// order fixed; enumerate derivative orders and rotation swaps
			Arrangement ar;
			ar.order = order;
			ar.dstOrder.resize(n);
			ar.dinOrder.resize(n);
			ar.swapRot.assign(n, 0);
			int permSign = grassmannSign(order, odd);

			std::function<void(int, int)> exploreAtoms = [&](int k, int swapSign) {
				if (k == n)
				{
					if (++explored > cap)
						throw ExprError("canonicalization explosion");
					std::vector<Atom> rebuilt;
					std::string key = encodeArrangement(m, ar, &rebuilt);
					int sign = permSign * swapSign;
					if (bestSign == 0 || key < bestKey)
					{
						bestKey = key;
						bestAtoms = std::move(rebuilt);
						bestSign = sign;
						signConflict = false;
					}
					else if (key == bestKey && sign != bestSign)
						signConflict = true;
					return;
				}
				int src = order[k];
				for (auto &dso : dstOpts[src])
				{
					ar.dstOrder[k] = dso;
					for (auto &dio : dinOpts[src])
					{
						ar.dinOrder[k] = dio;
						for (int sw = 0; sw < swapOpts[src]; ++sw)
						{
							ar.swapRot[k] = static_cast<char>(sw);
							exploreAtoms(k + 1, sw ? -swapSign : swapSign);
						}
					}
				}
			};
			exploreAtoms(0, 1);
			return;
		}
		auto [b, e] = groups[gi];
		std::vector<int> g = groupPerm[gi];
		do
		{
			for (int i = b; i < e; ++i)
				order[i] = g[i - b];
			exploreGroups(gi + 1);
		} while (std::next_permutation(g.begin(), g.end()));
	};
	exploreGroups(0);

	if (signConflict)
		return std::nullopt;

	Monomial out;
	out.coeff = bestSign < 0 ? -m.coeff : m.coeff;
	out.sym = m.sym;
	out.atoms = std::move(bestAtoms);
	if (keyOut)
		*keyOut = bestKey;
	return out;
}

Expression canonicalize(const Expression &e)
{
	// merge canonical monomials; key = factor structure + symbolic coefficient
	std::map<std::pair<std::string, SymProd>, Monomial> merged;
	for (const auto &t : e.terms)
	{
		std::string key;
		auto cm = canonicalizeMonomial(t, &key);
		if (!cm)
			continue;
		auto mk = std::make_pair(std::move(key), cm->sym);
		auto it = merged.find(mk);
		if (it == merged.end())
			merged.emplace(std::move(mk), std::move(*cm));
		else
		{
			it->second.coeff += cm->coeff;
			if (it->second.coeff.isZero())
				merged.erase(it);
		}
	}
	Expression out;
	for (auto &[k, m] : merged)
		out.terms.push_back(std::move(m));

	// externals must agree across monomials
	if (out.terms.size() > 1)
	{
		auto externals = [](const Monomial &m) {
			std::map<std::string, std::pair<IndexKind, Variance>> ex;
			for (auto &a : m.atoms)
				for (int li = 0; li < 3; ++li)
					for (auto &ix : listOf(a, li))
						if (!ix.isDummy())
							ex[ix.name] = {ix.kind, ix.var};
			return ex;
		};
		auto ref = externals(out.terms.front());
		for (size_t i = 1; i < out.terms.size(); ++i)
			if (externals(out.terms[i]) != ref)
				throw ExprError("free indices differ between monomials");
	}
	return out;
}

Expression operator+(const Expression &a, const Expression &b)
{
	Expression e = a;
	e.terms.insert(e.terms.end(), b.terms.begin(), b.terms.end());
	return canonicalize(e);
}

Expression operator-(const Expression &a, const Expression &b) { return a + (-b); }

Expression operator-(const Expression &a)
{
	Expression e = a;
	for (auto &t : e.terms)
		t.coeff = -t.coeff;
	return e;
}

Expression operator*(const Expression &a, const Expression &b)
{
	Expression e;
	for (const auto &ta : a.terms)
	{
		int off = maxDummyId(ta);
		for (const auto &tb : b.terms)
		{
			Monomial m;
			m.coeff = ta.coeff * tb.coeff;
			m.sym = ta.sym * tb.sym;
			m.atoms = ta.atoms;
			for (Atom at : tb.atoms)
			{
				for (int li = 0; li < 3; ++li)
					for (auto &ix : listOf(at, li))
						if (ix.isDummy())
							ix.dummy += off;
				m.atoms.push_back(std::move(at));
			}
			e.terms.push_back(std::move(m));
		}
	}
	return canonicalize(e);
}

Expression scale(const Expression &e, const Rational &c, const SymProd &s)
{
	Expression out = e;
	for (auto &t : out.terms)
	{
		t.coeff *= c;
		t.sym = t.sym * s;
	}
	return canonicalize(out);
}

bool equal(const Expression &a, const Expression &b)
{
	return canonicalize(a - b).isZero();
}

} // namespace vpdw
