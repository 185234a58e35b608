#pragma once

#include "vpdw/expr.hpp"
#include "vpdw/planewave.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vpdw {

// One term of a momentum-space tensor: rational coefficient, scale-parameter
// power, symbolic scalars, momentum vector factors, metric factors, scalar
// products (negative powers are denominators), formal squared-momentum
// denominators carrying the epsilon prescription, and references to the
// regularized shell integrals.
struct MTerm {
	Rational coeff = Rational(1);
	SymProd sym;
	int lambdaPow = 0;
	std::vector<std::pair<std::string, Index>> moms;
	std::vector<std::pair<Index, Index>> etas;
	std::map<std::pair<std::string, std::string>, int> dots;
	std::map<std::string, int> epsDenom; // (q^2 - i eps)^-n per momentum name
	std::map<int, int> omega;            // shell integral power k -> multiplicity
};

struct MomTensor {
	std::vector<MTerm> terms;
	bool isZero() const { return terms.empty(); }
};

// Momentum names and family; an expression may only mix registered names.
class MomentumRegistry {
  public:
	void add(const std::string &name, bool inner) { inner_[name] = inner; }
	bool isInner(const std::string &name) const;
	bool known(const std::string &name) const { return inner_.count(name) != 0; }

  private:
	std::map<std::string, bool> inner_;
};

MomTensor canonicalizeMom(const MomTensor &t, const MomentumRegistry &reg);
MomTensor operator+(const MomTensor &a, const MomTensor &b);
MomTensor operator*(const MomTensor &a, const MomTensor &b);
MomTensor momScale(const MomTensor &t, const Rational &c);
bool momEqual(const MomTensor &a, const MomTensor &b, const MomentumRegistry &reg);
std::string momPrint(const MomTensor &t);

// inner scale weight per term: Lambda power minus inner-momentum powers;
// zero for every legal rule of the theory
std::vector<int> momScaleWeights(const MomTensor &t, const MomentumRegistry &reg);

// linear combination of basis momenta with exact coefficients
using MomCombo = std::map<std::string, Rational>;

enum class ProjectorMode { Full, Simplified };
enum class GhostVertexVariant { AsPrinted, IndexConsistent };

// covariant-gauge propagators; the inner projector is transversal in Full
// mode and the plain metric in Simplified mode. xi = 0 is rejected.
MomTensor gaugePropagator(const std::string &p, const std::string &P,
                          const std::string &mu, const std::string &nu,
                          const std::string &al, const std::string &be,
                          ProjectorMode mode, std::optional<Rational> xiValue = {});
MomTensor ghostPropagator(const std::string &p, const std::string &P,
                          const std::string &ga, const std::string &de,
                          ProjectorMode mode);

struct VertexLeg {
	MomCombo p, P; // incoming momenta
	std::string mu;  // spacetime leg index ("" for ghost legs)
	std::string al;  // inner leg index
};

// three and four gauge-boson vertices, and the ghost-gauge vertex (with the
// literal printed index structure or the index-consistent reading)
MomTensor vertexAAA(const std::array<VertexLeg, 3> &legs);
MomTensor vertexAAAA(const std::array<VertexLeg, 4> &legs);
MomTensor vertexGhostA(const std::array<VertexLeg, 3> &legs, GhostVertexVariant variant);

// exact component evaluation at rational momenta; keys run over the free
// indices in the given order
std::map<std::vector<int>, Rational>
evaluateComponents(const MomTensor &t, const std::map<std::string, Vec4> &values,
                   const std::vector<std::string> &freeOrder,
                   const MomentumRegistry &reg);

// replace a homogeneous monomial in one loop's inner momentum by the
// symmetrized-metric tensor times the matching shell integral; odd ranks
// vanish. Terms mixing the loop momentum into scalar products with other
// momenta are rejected.
MomTensor reduceInner(const MomTensor &t, const std::string &loop,
                      const MomentumRegistry &reg);

// fully symmetric sum over the (2k-1)!! metric pairings of the given index
// names, unit coefficients
MomTensor symEtaTensor(const std::vector<std::string> &indexNames);

// full self-contraction value of the pairing sum (the normalization trace)
Rational symEtaFullTrace(int k);

// ---- diagrams ---------------------------------------------------------------

struct Diagram {
	struct Vertex {
		std::string kind; // AAA | AAAA | ghostA
		std::vector<MomCombo> legP, legPP;
		std::vector<int> legEdge;      // edge id or -1 for external
		std::vector<std::string> extMu, extAl;
	};
	struct Edge {
		std::string species; // gauge | ghost
		MomCombo p, P;
	};
	std::vector<Vertex> vertices;
	std::vector<Edge> edges;
	std::vector<std::string> loops; // loop momentum names
	ProjectorMode projector = ProjectorMode::Simplified;
	GhostVertexVariant ghostVariant = GhostVertexVariant::IndexConsistent;
};

Diagram diagramFromJson(const std::string &jsonText);

struct ContractionResult {
	MomTensor tensor;
	MomentumRegistry registry;
	std::vector<std::string> loops;
};

// momentum conservation is checked at every vertex; all internal indices are
// contracted through the propagators
ContractionResult contractDiagram(const Diagram &d);

} // namespace vpdw
