#pragma once

#include "vpdw/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vpdw {

struct OmegaValue {
	double value = 0;
	double error = 0;
	std::string method;
	int64_t evaluations = 0;
	bool converged = true;
};

// Regularized inner-momentum shell integral by the one-dimensional closed
// form: the integrand x^k (sqrt(1-x) - x ln((sqrt(1-x)+1)/sqrt(x))) on [0,1]
// with prefactor 1/((2 pi)^3 4^{k+2}); endpoints are tamed by quadratic
// substitutions on the two halves.
OmegaValue omegaClosed(int k, double relTol = 1e-12);

// The same integral in exact form: Omega_k = pi^-3 * omegaExactPi3(k), with
// omegaExactPi3(k) = k! 2^{k+1} / ((k+2)(2k+3)!! * 8 * 4^{k+2}) derived from
// the Euler-integral antiderivative. Used as an independent test oracle.
Rational omegaExactPi3(int k);
double omegaExact(int k);

// First-principles oracle: the shell-sliced cone integral over both light
// cones reduced to two nested radial integrals in the frame of the cutoff
// vector,
//   Omega_k = Lambda^{2k+4}/(4 pi^3) Int_0^{1/(4 Lambda^2)} dM^2 M^{2k}
//             Int_0^{sqrt(1/(4 Lambda^2)-M^2)} dr r^2/sqrt(M^2+r^2),
// evaluated by nested adaptive quadrature; the result is independent of the
// internal scale by construction.
OmegaValue omegaOracle(int k, double relTol = 1e-10, double lambda = 1.0);

// Monte Carlo over the same two-dimensional region with splittable per-shard
// substreams; a fixed (seed, shards) pair reproduces bitwise.
OmegaValue omegaMonteCarlo(int k, int64_t samples, uint64_t seed, int shards = 8,
                           double lambda = 1.0);

// one-loop beta functions in terms of the first shell integral
double betaPure(double g, double omega1);
double betaSm(double g, double omega1);

// comparison against the quoted closed-value of the first shell integral:
// the two exact forms differ by a constant rational factor
struct QuotedComparison {
	Rational computedPi3; // computed Omega_1 * pi^3, exact
	Rational quotedPi3;   // quoted   Omega_1 * pi^3, exact
	Rational factor;      // computed / quoted
};
QuotedComparison omegaOneComparison();

struct OmegaTable {
	struct Entry {
		int k;
		double value;
		double error;
		std::string method;
		int64_t evaluations;
	};
	std::vector<Entry> entries;

	std::string toJson() const;
	static OmegaTable fromJson(const std::string &text);
};

OmegaTable computeOmegaTable(int kMax, const std::string &method, double relTol,
                             int64_t mcSamples, uint64_t seed);

} // namespace vpdw
