#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace vpdw {

struct QuadResult {
	double value = 0;
	double error = 0;
	int64_t evaluations = 0;
	bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1]
inline const double gkNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline const double gkWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline const double gaussWeights[7] = {0.129484966168870, 0.279705391489277,
                                       0.381830050505119, 0.417959183673469,
                                       0.381830050505119, 0.279705391489277,
                                       0.129484966168870};

struct Panel {
	double a, b, value, error;
};

inline Panel evalPanel(const std::function<double(double)> &f, double a, double b,
                       int64_t &evals)
{
	double c = 0.5 * (a + b), h = 0.5 * (b - a);
	double kron = 0, gauss = 0, comp = 0;
	for (int i = 0; i < 15; ++i)
	{
		double fx = f(c + h * gkNodes[i]);
		++evals;
		// compensated accumulation
		double term = gkWeights[i] * fx;
		double y = term - comp;
		double t = kron + y;
		comp = (t - kron) - y;
		kron = t;
		if (i % 2 == 1)
			gauss += gaussWeights[i / 2] * fx;
	}
	Panel p;
	p.a = a;
	p.b = b;
	p.value = kron * h;
	p.error = std::abs((kron - gauss) * h);
	return p;
}

} // namespace detail

// Globally adaptive bisection; panels with the largest error estimate are
// refined until the total satisfies the relative tolerance.
inline QuadResult adaptiveQuadrature(const std::function<double(double)> &f, double a,
                                     double b, double relTol, int maxPanels = 4000)
{
	QuadResult r;
	std::vector<detail::Panel> panels;
	panels.push_back(detail::evalPanel(f, a, b, r.evaluations));
	while (static_cast<int>(panels.size()) < maxPanels)
	{
		double total = 0, err = 0, comp = 0;
		for (auto &p : panels)
		{
			double y = p.value - comp;
			double t = total + y;
			comp = (t - total) - y;
			total = t;
			err += p.error;
		}
		if (err <= relTol * std::abs(total) + 1e-300)
		{
			r.value = total;
			r.error = err;
			return r;
		}
		size_t worst = 0;
		for (size_t i = 1; i < panels.size(); ++i)
			if (panels[i].error > panels[worst].error)
				worst = i;
		detail::Panel p = panels[worst];
		panels.erase(panels.begin() + worst);
		double mid = 0.5 * (p.a + p.b);
		panels.push_back(detail::evalPanel(f, p.a, mid, r.evaluations));
		panels.push_back(detail::evalPanel(f, mid, p.b, r.evaluations));
	}
	double total = 0, err = 0;
	for (auto &p : panels)
	{
		total += p.value;
		err += p.error;
	}
	r.value = total;
	r.error = err;
	r.converged = false;
	return r;
}

} // namespace vpdw
