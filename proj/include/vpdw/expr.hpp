#pragma once

#include "vpdw/rational.hpp"
#include "vpdw/symbols.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vpdw {

enum class IndexKind : uint8_t { Spacetime, Inner };
enum class Variance : uint8_t { Upper, Lower };

// A tensor index slot. External indices are named; contracted (dummy) pairs
// carry a positive pair id. Raising and lowering with the flat metric is
// implicit, so dummy variance is a representation detail normalized during
// canonicalization.
struct Index {
	IndexKind kind = IndexKind::Inner;
	Variance var = Variance::Upper;
	int dummy = 0;
	std::string name;

	static Index ext(IndexKind k, Variance v, std::string n)
	{
		Index i;
		i.kind = k;
		i.var = v;
		i.name = std::move(n);
		return i;
	}
	static Index dum(IndexKind k, Variance v, int id)
	{
		Index i;
		i.kind = k;
		i.var = v;
		i.dummy = id;
		return i;
	}
	bool isDummy() const { return dummy > 0; }

	friend bool operator==(const Index &a, const Index &b)
	{
		return a.kind == b.kind && a.var == b.var && a.dummy == b.dummy && a.name == b.name;
	}
};

enum class Species : uint8_t {
	Theta,         // anticommuting transformation parameter (dim -1, ghost -1)
	GaugeParam,    // divergence-free gauge parameter, x- and X-dependent
	ResidualParam, // residual Minkowski-gauge parameter, linear in X
	InnerRotation, // constant-in-X antisymmetric rotation coefficient
	ConstTensor,   // constant tensor in inner space
	NL,            // Nakanishi-Lautrup auxiliary field h
	GaugeA,        // gauge field A
	AntiGhost,     // ws
	Ghost,         // w
	Matter         // psi, opaque odd atom
};

struct SpeciesInfo {
	const char *printName;
	bool odd;
	int massDim2;  // twice the mass dimension
	int ghost;
	int nSpacetimeIdx;
	int nInnerIdx;     // -1: variable arity (ConstTensor)
	bool constInner;   // inner derivative vanishes
	bool constSpacetime;
	int sortRank;  // canonical factor order, smaller = further left
	int pivotRank; // integration-by-parts pivot preference, smaller preferred
};

const SpeciesInfo &speciesInfo(Species s);
bool speciesNeedsDivergenceConstraint(Species s);

struct Atom {
	Species species;
	std::string name; // print name; distinguishes parameters and tensors
	std::vector<Index> idx;
	std::vector<Index> dst; // spacetime derivatives applied to the atom
	std::vector<Index> din; // inner derivatives (each implicitly paired with a Lambda)

	bool odd() const { return speciesInfo(species).odd; }
};

Atom makeAtom(Species s, std::vector<Index> idx = {});

struct Monomial {
	Rational coeff = Rational(1);
	SymProd sym;
	std::vector<Atom> atoms;
};

struct Expression {
	std::vector<Monomial> terms;

	bool isZero() const { return terms.empty(); }
};

// --- canonicalization -------------------------------------------------------

// Deterministic canonical form of a single monomial: factors ordered by a
// relabeling-invariant key, dummies renumbered by first occurrence, dummy
// variance normalized (first occurrence upper), Grassmann sign tracked through
// every swap. Returns nothing when the monomial is identically zero by odd
// symmetry (a signed factor permutation maps it onto itself).
std::optional<Monomial> canonicalizeMonomial(const Monomial &m, std::string *keyOut = nullptr);

Expression canonicalize(const Expression &e);

Expression operator+(const Expression &a, const Expression &b);
Expression operator-(const Expression &a, const Expression &b);
Expression operator*(const Expression &a, const Expression &b);
Expression operator-(const Expression &a);
Expression scale(const Expression &e, const Rational &c, const SymProd &s = {});

Expression atomExpr(Atom a, Rational c = Rational(1), SymProd s = {});
Expression constantExpr(Rational c, SymProd s = {});

// structural equality of canonical forms
bool equal(const Expression &a, const Expression &b);

// largest dummy id present (for fresh allocation)
int maxDummyId(const Monomial &m);

struct ExprError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

} // namespace vpdw
