#pragma once

#include "vpdw/rational.hpp"

#include <map>
#include <string>

namespace vpdw {

// Product of named scalar coefficients with integer (possibly negative)
// exponents, e.g. Z^2 * N^-1. The empty product is 1.
class SymProd {
  public:
	SymProd() = default;
	explicit SymProd(const std::string &name, int pow = 1)
	{
		if (pow != 0)
			exps_[name] = pow;
	}

	bool isOne() const { return exps_.empty(); }
	const std::map<std::string, int> &exps() const { return exps_; }

	SymProd &mul(const std::string &name, int pow)
	{
		if (pow == 0)
			return *this;
		int &e = exps_[name];
		e += pow;
		if (e == 0)
			exps_.erase(name);
		return *this;
	}

	friend SymProd operator*(const SymProd &a, const SymProd &b)
	{
		SymProd r = a;
		for (auto &[n, p] : b.exps_)
			r.mul(n, p);
		return r;
	}

	friend SymProd operator/(const SymProd &a, const SymProd &b)
	{
		SymProd r = a;
		for (auto &[n, p] : b.exps_)
			r.mul(n, -p);
		return r;
	}

	SymProd inverse() const
	{
		SymProd r;
		for (auto &[n, p] : exps_)
			r.exps_[n] = -p;
		return r;
	}

	friend bool operator==(const SymProd &a, const SymProd &b) { return a.exps_ == b.exps_; }
	friend bool operator!=(const SymProd &a, const SymProd &b) { return !(a == b); }
	friend bool operator<(const SymProd &a, const SymProd &b) { return a.exps_ < b.exps_; }

	std::string str() const
	{
		std::string s;
		for (auto &[n, p] : exps_)
		{
			if (!s.empty())
				s += "*";
			s += n;
			if (p != 1)
				s += "^" + std::to_string(p);
		}
		return s;
	}

  private:
	std::map<std::string, int> exps_;
};

// Polynomial (Laurent) in the named scalars with exact rational coefficients.
// Used when collecting identity coefficients and solving linear constraints.
class SymPoly {
  public:
	SymPoly() = default;
	SymPoly(Rational c)
	{
		if (!c.isZero())
			terms_[SymProd()] = std::move(c);
	}
	SymPoly(Rational c, SymProd m)
	{
		if (!c.isZero())
			terms_[std::move(m)] = std::move(c);
	}

	bool isZero() const { return terms_.empty(); }
	const std::map<SymProd, Rational> &terms() const { return terms_; }

	// nonzero single-term polynomials factor as coeff * monomial
	bool isMonomial() const { return terms_.size() == 1; }

	void add(const SymProd &m, const Rational &c)
	{
		if (c.isZero())
			return;
		auto it = terms_.find(m);
		if (it == terms_.end())
			terms_.emplace(m, c);
		else
		{
			it->second += c;
			if (it->second.isZero())
				terms_.erase(it);
		}
	}

	friend SymPoly operator+(const SymPoly &a, const SymPoly &b)
	{
		SymPoly r = a;
		for (auto &[m, c] : b.terms_)
			r.add(m, c);
		return r;
	}
	friend SymPoly operator-(const SymPoly &a, const SymPoly &b)
	{
		SymPoly r = a;
		for (auto &[m, c] : b.terms_)
			r.add(m, -c);
		return r;
	}
	friend SymPoly operator*(const SymPoly &a, const SymPoly &b)
	{
		SymPoly r;
		for (auto &[ma, ca] : a.terms_)
			for (auto &[mb, cb] : b.terms_)
				r.add(ma * mb, ca * cb);
		return r;
	}
	friend SymPoly operator-(const SymPoly &a)
	{
		SymPoly r;
		for (auto &[m, c] : a.terms_)
			r.terms_.emplace(m, -c);
		return r;
	}

	SymPoly &operator+=(const SymPoly &b) { return *this = *this + b; }
	SymPoly &operator-=(const SymPoly &b) { return *this = *this - b; }
	SymPoly &operator*=(const SymPoly &b) { return *this = *this * b; }

	friend bool operator==(const SymPoly &a, const SymPoly &b) { return a.terms_ == b.terms_; }
	friend bool operator!=(const SymPoly &a, const SymPoly &b) { return !(a == b); }

	// exact division by a single-term polynomial
	SymPoly divByMonomial(const Rational &c, const SymProd &m) const
	{
		SymPoly r;
		SymProd minv = m.inverse();
		for (auto &[tm, tc] : terms_)
			r.add(tm * minv, tc / c);
		return r;
	}

	// substitute a scalar symbol by coeff*monomial (Laurent allowed)
	SymPoly substitute(const std::string &name, const Rational &c, const SymProd &m) const
	{
		SymPoly r;
		for (auto &[tm, tc] : terms_)
		{
			auto it = tm.exps().find(name);
			if (it == tm.exps().end())
			{
				r.add(tm, tc);
				continue;
			}
			int p = it->second;
			SymProd rest = tm;
			rest.mul(name, -p);
			Rational cc = tc;
			SymProd mm = rest;
			// c^p * m^p; p may be negative
			Rational cp(1);
			for (int i = 0; i < (p < 0 ? -p : p); ++i)
				cp *= c;
			if (p < 0)
				cp = Rational(1) / cp;
			cc *= cp;
			for (auto &[n, e] : m.exps())
				mm.mul(n, e * p);
			r.add(mm, cc);
		}
		return r;
	}

	// true when every term's monomial contains the given symbol factor
	bool divisibleBy(const std::string &name) const
	{
		for (auto &[m, c] : terms_)
		{
			(void)c;
			auto it = m.exps().find(name);
			if (it == m.exps().end() || it->second <= 0)
				return false;
		}
		return !terms_.empty();
	}

	std::string str() const
	{
		if (terms_.empty())
			return "0";
		std::string s;
		bool first = true;
		for (auto &[m, c] : terms_)
		{
			std::string piece;
			Rational cc = c;
			if (!first && !cc.isNegative())
				s += " + ";
			else if (!cc.isNegative())
				;
			else
			{
				s += first ? "-" : " - ";
				cc = -cc;
			}
			if (m.isOne())
				piece = cc.str();
			else if (cc.isOne())
				piece = m.str();
			else
				piece = cc.str() + "*" + m.str();
			s += piece;
			first = false;
		}
		return s;
	}

  private:
	std::map<SymProd, Rational> terms_;
};

} // namespace vpdw
