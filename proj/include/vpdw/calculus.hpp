#pragma once

#include "vpdw/expr.hpp"

#include <utility>
#include <vector>

namespace vpdw {

// Leibniz derivative along the given index; the index kind selects the family.
// Spacetime derivatives raise the mass dimension by one; inner derivatives are
// Lambda-paired and leave it unchanged. Derivatives are even operators, so no
// Grassmann signs arise.
Expression derive(const Expression &e, const Index &d);

// Mass dimension of a homogeneous expression; throws listing offenders
// otherwise. Zero expression has undefined dimension -> throws.
Rational massDimension(const Expression &e);
int ghostNumber(const Expression &e);

// Inner scale weight per monomial. Every inner derivative and inner momentum
// carries an implicit Lambda partner in this representation, so field
// expressions always come out at weight zero; the momentum-space checker in
// the Feynman layer does the nontrivial accounting.
std::vector<int> scaleWeights(const Expression &e);

// Delete monomials in which a divergence-constrained species carries an inner
// derivative contracted onto the same atom's own inner index.
Expression applyDivergenceConstraint(const Expression &e);

// A term of a constant-tensor expansion over metric pairings: coefficient
// times a perfect matching of the tensor's slots.
struct EtaPairing {
	Rational coeff;
	SymProd sym;
	std::vector<std::pair<int, int>> pairs;
};

// Replace every occurrence of the named constant tensor by the given
// expansion, gluing paired slots through the implicit metric. Closed metric
// cycles contribute the inner-space trace factor 4.
Expression substituteTensor(const Expression &e, const std::string &tensorName,
                            const std::vector<EtaPairing> &expansion);

// Rename atoms of one species/name to another name (same index structure).
Expression renameAtom(const Expression &e, Species s, const std::string &from,
                      const std::string &to);

// Substitute a named scalar coefficient by coeff * monomial.
Expression substituteScalar(const Expression &e, const std::string &name,
                            const Rational &c, const SymProd &m);

// Monomials that contain at least one / no atom of the species.
Expression dropMonomialsWith(const Expression &e, Species s);

// Collect the expression as a map from factor structure to symbolic-polynomial
// coefficient (used by the constraint solvers).
std::vector<std::pair<Monomial, SymPoly>> collectBySkeleton(const Expression &e);

} // namespace vpdw
