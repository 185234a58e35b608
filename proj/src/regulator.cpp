#include "vpdw/regulator.hpp"

#include "vpdw/expr.hpp"
#include "vpdw/quadrature.hpp"
#include "vpdw/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace vpdw {

namespace {

constexpr double PI = 3.141592653589793238462643383279502884;

double closedIntegrand(int k, double x)
{
	if (x <= 0)
		return k == 0 ? 1.0 : 0.0;
	if (x >= 1)
		return 0.0;
	double s = std::sqrt(1.0 - x);
	return std::pow(x, k) * (s - x * std::log((s + 1.0) / std::sqrt(x)));
}

} // namespace

OmegaValue omegaClosed(int k, double relTol)
{
	// x = t^2 on the lower half tames the x ln x endpoint; x = 1 - u^2 on the
	// upper half removes the square-root kink
	auto lower = [k](double t) { return closedIntegrand(k, t * t) * 2.0 * t; };
	auto upper = [k](double u) { return closedIntegrand(k, 1.0 - u * u) * 2.0 * u; };
	double split = std::sqrt(0.5);
	QuadResult lo = adaptiveQuadrature(lower, 0.0, split, relTol * 0.5);
	QuadResult hi = adaptiveQuadrature(upper, 0.0, split, relTol * 0.5);
	double pref = 1.0 / (std::pow(2.0 * PI, 3) * std::pow(4.0, k + 2));
	OmegaValue v;
	v.value = (lo.value + hi.value) * pref;
	v.error = (lo.error + hi.error) * pref;
	v.method = "closed";
	v.evaluations = lo.evaluations + hi.evaluations;
	v.converged = lo.converged && hi.converged;
	return v;
}

Rational omegaExactPi3(int k)
{
	// Int_0^1 x^k sqrt(1-x) dx - Int x^{k+1} ln((sqrt(1-x)+1)/sqrt x) dx
	//   = k! 2^{k+1} / ((k+2)(2k+3)!!)
	BigInt num(1);
	for (int i = 2; i <= k; ++i)
		num = num * BigInt(i);
	for (int i = 0; i < k + 1; ++i)
		num = num * BigInt(2);
	BigInt den(k + 2);
	for (int i = 3; i <= 2 * k + 3; i += 2)
		den = den * BigInt(i);
	Rational Ik(num, den);
	// Omega_k pi^3 = I_k / (8 * 4^{k+2})
	BigInt p(8);
	for (int i = 0; i < k + 2; ++i)
		p = p * BigInt(4);
	return Ik / Rational(p, BigInt(1));
}

double omegaExact(int k) { return omegaExactPi3(k).toDouble() / std::pow(PI, 3); }

OmegaValue omegaOracle(int k, double relTol, double lambda)
{
	double M2max = 1.0 / (4.0 * lambda * lambda);
	int64_t evals = 0;
	bool ok = true;
	auto inner = [&](double M2) {
		double rmax = std::sqrt(std::max(0.0, M2max - M2));
		if (rmax <= 0)
			return 0.0;
		QuadResult q = adaptiveQuadrature(
		    [&](double r) { return r * r / std::sqrt(M2 + r * r); }, 0.0, rmax,
		    relTol * 0.1, 2000);
		evals += q.evaluations;
		ok = ok && q.converged;
		return q.value;
	};
	QuadResult outer = adaptiveQuadrature(
	    [&](double M2) { return std::pow(M2, k) * inner(M2); }, 0.0, M2max, relTol,
	    2000);
	double pref = std::pow(lambda, 2 * k + 4) / (4.0 * std::pow(PI, 3));
	OmegaValue v;
	v.value = outer.value * pref;
	v.error = outer.error * pref;
	v.method = "oracle2d";
	v.evaluations = evals + outer.evaluations;
	v.converged = ok && outer.converged;
	return v;
}

OmegaValue omegaMonteCarlo(int k, int64_t samples, uint64_t seed, int shards,
                           double lambda)
{
	double M2max = 1.0 / (4.0 * lambda * lambda);
	double rmaxAll = std::sqrt(M2max);
	double area = M2max * rmaxAll;
	double pref = std::pow(lambda, 2 * k + 4) / (4.0 * std::pow(PI, 3));

	int64_t perShard = samples / shards;
	double sum = 0, sumSq = 0, comp = 0, compSq = 0;
	int64_t n = 0;
	for (int sh = 0; sh < shards; ++sh)
	{
		Xoshiro256 rng = Xoshiro256::forShard(seed, static_cast<uint64_t>(sh));
		for (int64_t i = 0; i < perShard; ++i)
		{
			double M2 = rng.uniform() * M2max;
			double r = rng.uniform() * rmaxAll;
			double f = 0;
			if (r * r <= M2max - M2)
				f = std::pow(M2, k) * r * r / std::sqrt(M2 + r * r);
			double y = f - comp;
			double t = sum + y;
			comp = (t - sum) - y;
			sum = t;
			double y2 = f * f - compSq;
			double t2 = sumSq + y2;
			compSq = (t2 - sumSq) - y2;
			sumSq = t2;
			++n;
		}
	}
	double mean = sum / static_cast<double>(n);
	double var = sumSq / static_cast<double>(n) - mean * mean;
	OmegaValue v;
	v.value = mean * area * pref;
	v.error = std::sqrt(std::max(0.0, var) / static_cast<double>(n)) * area * pref;
	v.method = "montecarlo";
	v.evaluations = n;
	return v;
}

double betaPure(double g, double omega1)
{
	return -(g * g * g) / (4.0 * PI * PI) * (11.0 / 3.0) * omega1;
}

double betaSm(double g, double omega1)
{
	return +(g * g * g) / (4.0 * PI * PI) * 2.0 * omega1;
}

QuotedComparison omegaOneComparison()
{
	QuotedComparison c;
	c.computedPi3 = omegaExactPi3(1);
	// quoted value: 1/(720 (4 pi)^3) = (1/46080) / pi^3
	c.quotedPi3 = Rational(1, 46080);
	c.factor = c.computedPi3 / c.quotedPi3;
	return c;
}

std::string OmegaTable::toJson() const
{
	nlohmann::ordered_json j;
	j["entries"] = nlohmann::ordered_json::array();
	for (auto &e : entries)
	{
		nlohmann::ordered_json row;
		row["k"] = e.k;
		std::ostringstream os;
		os.precision(12);
		os << std::scientific << e.value;
		row["value"] = os.str();
		std::ostringstream oe;
		oe.precision(3);
		oe << std::scientific << e.error;
		row["error"] = oe.str();
		row["method"] = e.method;
		row["evaluations"] = e.evaluations;
		j["entries"].push_back(row);
	}
	return j.dump(2) + "\n";
}

OmegaTable OmegaTable::fromJson(const std::string &text)
{
	OmegaTable t;
	auto j = nlohmann::json::parse(text);
	for (auto &row : j.at("entries"))
	{
		Entry e;
		e.k = row.at("k").get<int>();
		e.value = std::stod(row.at("value").get<std::string>());
		e.error = std::stod(row.at("error").get<std::string>());
		e.method = row.at("method").get<std::string>();
		e.evaluations = row.at("evaluations").get<int64_t>();
		t.entries.push_back(e);
	}
	return t;
}

OmegaTable computeOmegaTable(int kMax, const std::string &method, double relTol,
                             int64_t mcSamples, uint64_t seed)
{
	OmegaTable t;
	for (int k = 0; k <= kMax; ++k)
	{
		OmegaValue v;
		if (method == "closed")
			v = omegaClosed(k, relTol);
		else if (method == "oracle")
			v = omegaOracle(k, relTol);
		else if (method == "mc")
			v = omegaMonteCarlo(k, mcSamples, seed);
		else
			throw ExprError("unknown method '" + method + "'");
		if (!v.converged)
			throw ExprError("quadrature did not reach the requested tolerance for k=" +
			                std::to_string(k));
		t.entries.push_back({k, v.value, v.error, v.method, v.evaluations});
	}
	return t;
}

} // namespace vpdw
