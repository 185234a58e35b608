#pragma once

#include "vpdw/expr.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vpdw {

// exact complex rational, for plane-wave factors of i per derivative
struct GaussianRational {
	Rational re, im;

	bool isZero() const { return re.isZero() && im.isZero(); }
	friend GaussianRational operator+(const GaussianRational &a, const GaussianRational &b)
	{
		return {a.re + b.re, a.im + b.im};
	}
	friend GaussianRational operator*(const GaussianRational &a, const GaussianRational &b)
	{
		return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
	}
	std::string str() const { return "(" + re.str() + ") + (" + im.str() + ")i"; }
};

using Vec4 = std::array<Rational, 4>;

// One Fourier mode of a field: momenta plus factorized polarizations. The
// spacetime polarization applies to spacetime index slots, the inner
// polarization to inner slots; scalar fields use amp.
struct PlaneWaveMode {
	Vec4 p{};   // spacetime momentum, upper components
	Vec4 P{};   // inner momentum, upper components
	Vec4 pol{}; // spacetime polarization
	Vec4 u{};   // inner polarization
	Rational amp = Rational(1);
};

// Exact value of the expression with every field a finite sum of modes,
// integrated over spacetime and inner space: assignments of modes to atom
// instances contribute only when their total momentum vanishes. Expressions
// must be index-scalars. One mode list per atom print name; at most one atom
// of any odd species per monomial.
GaussianRational planeWaveEvaluate(const Expression &e,
                                   const std::map<std::string, std::vector<PlaneWaveMode>> &modes);

// Canned divergence-free transversal configurations used to certify that an
// expression is not a total derivative: a nonzero integrated value on any of
// them rules out equivalence to zero. Returns the value found, or nothing.
std::optional<std::string> planeWaveDisprove(const Expression &e);

} // namespace vpdw
