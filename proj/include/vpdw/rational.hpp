#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpdw {

// Arbitrary-precision signed integer, little-endian 32-bit limbs.
// Sizes stay tiny in practice (coefficients of symbolic identities),
// so schoolbook algorithms are plenty.
class BigInt {
  public:
	BigInt() = default;
	BigInt(int64_t v)
	{
		if (v < 0)
		{
			neg_ = true;
			// avoid overflow on INT64_MIN
			uint64_t u = ~static_cast<uint64_t>(v) + 1;
			push64(u);
		}
		else
			push64(static_cast<uint64_t>(v));
		trim();
	}

	bool isZero() const { return limbs_.empty(); }
	bool isNegative() const { return neg_; }

	static int cmpAbs(const BigInt &a, const BigInt &b)
	{
		if (a.limbs_.size() != b.limbs_.size())
			return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
		for (size_t i = a.limbs_.size(); i-- > 0;)
			if (a.limbs_[i] != b.limbs_[i])
				return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
		return 0;
	}

	static int cmp(const BigInt &a, const BigInt &b)
	{
		if (a.neg_ != b.neg_)
			return a.neg_ ? -1 : 1;
		int c = cmpAbs(a, b);
		return a.neg_ ? -c : c;
	}

	friend bool operator==(const BigInt &a, const BigInt &b) { return cmp(a, b) == 0; }
	friend bool operator!=(const BigInt &a, const BigInt &b) { return cmp(a, b) != 0; }
	friend bool operator<(const BigInt &a, const BigInt &b) { return cmp(a, b) < 0; }

	friend BigInt operator-(const BigInt &a)
	{
		BigInt r = a;
		if (!r.isZero())
			r.neg_ = !r.neg_;
		return r;
	}

	friend BigInt operator+(const BigInt &a, const BigInt &b)
	{
		if (a.neg_ == b.neg_)
		{
			BigInt r = addAbs(a, b);
			r.neg_ = a.neg_ && !r.isZero();
			return r;
		}
		int c = cmpAbs(a, b);
		if (c == 0)
			return BigInt();
		if (c > 0)
		{
			BigInt r = subAbs(a, b);
			r.neg_ = a.neg_ && !r.isZero();
			return r;
		}
		BigInt r = subAbs(b, a);
		r.neg_ = b.neg_ && !r.isZero();
		return r;
	}

	friend BigInt operator-(const BigInt &a, const BigInt &b) { return a + (-b); }

	friend BigInt operator*(const BigInt &a, const BigInt &b)
	{
		if (a.isZero() || b.isZero())
			return BigInt();
		BigInt r;
		r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
		for (size_t i = 0; i < a.limbs_.size(); ++i)
		{
			uint64_t carry = 0;
			for (size_t j = 0; j < b.limbs_.size(); ++j)
			{
				uint64_t cur = static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] +
				               r.limbs_[i + j] + carry;
				r.limbs_[i + j] = static_cast<uint32_t>(cur);
				carry = cur >> 32;
			}
			r.limbs_[i + b.limbs_.size()] += static_cast<uint32_t>(carry);
		}
		r.neg_ = a.neg_ != b.neg_;
		r.trim();
		return r;
	}

	// truncated division (quotient rounds toward zero)
	static void divmod(const BigInt &a, const BigInt &b, BigInt &q, BigInt &r)
	{
		if (b.isZero())
			throw std::domain_error("BigInt: division by zero");
		q = BigInt();
		r = BigInt();
		if (a.isZero())
			return;
		// bitwise long division on |a| / |b|
		q.limbs_.assign(a.limbs_.size(), 0);
		for (size_t bit = a.limbs_.size() * 32; bit-- > 0;)
		{
			r.shiftLeft1();
			if (a.bit(bit))
				r.setBit0();
			if (cmpAbs(r, b) >= 0)
			{
				BigInt t = subAbs(r, b);
				r = t;
				q.limbs_[bit / 32] |= (1u << (bit % 32));
			}
		}
		q.trim();
		r.trim();
		q.neg_ = (a.neg_ != b.neg_) && !q.isZero();
		r.neg_ = a.neg_ && !r.isZero();
	}

	friend BigInt operator/(const BigInt &a, const BigInt &b)
	{
		BigInt q, r;
		divmod(a, b, q, r);
		return q;
	}
	friend BigInt operator%(const BigInt &a, const BigInt &b)
	{
		BigInt q, r;
		divmod(a, b, q, r);
		return r;
	}

	static BigInt gcd(BigInt a, BigInt b)
	{
		a.neg_ = false;
		b.neg_ = false;
		while (!b.isZero())
		{
			BigInt q, r;
			divmod(a, b, q, r);
			a = b;
			b = r;
		}
		return a;
	}

	std::string str() const
	{
		if (isZero())
			return "0";
		std::string digits;
		BigInt t = *this;
		t.neg_ = false;
		BigInt ten(10);
		while (!t.isZero())
		{
			BigInt q, r;
			divmod(t, ten, q, r);
			digits += static_cast<char>('0' + (r.isZero() ? 0 : r.limbs_[0]));
			t = q;
		}
		if (neg_)
			digits += '-';
		return std::string(digits.rbegin(), digits.rend());
	}

	// valid only when the value fits; used for small exponents and tests
	int64_t toInt64() const
	{
		uint64_t v = 0;
		if (limbs_.size() > 2)
			throw std::overflow_error("BigInt: toInt64 overflow");
		if (limbs_.size() >= 1)
			v = limbs_[0];
		if (limbs_.size() == 2)
			v |= static_cast<uint64_t>(limbs_[1]) << 32;
		if (v > static_cast<uint64_t>(INT64_MAX))
			throw std::overflow_error("BigInt: toInt64 overflow");
		return neg_ ? -static_cast<int64_t>(v) : static_cast<int64_t>(v);
	}

	double toDouble() const
	{
		double v = 0;
		for (size_t i = limbs_.size(); i-- > 0;)
			v = v * 4294967296.0 + limbs_[i];
		return neg_ ? -v : v;
	}

  private:
	std::vector<uint32_t> limbs_; // empty == zero
	bool neg_ = false;

	void push64(uint64_t u)
	{
		if (u)
			limbs_.push_back(static_cast<uint32_t>(u));
		if (u >> 32)
			limbs_.push_back(static_cast<uint32_t>(u >> 32));
	}
	void trim()
	{
		while (!limbs_.empty() && limbs_.back() == 0)
			limbs_.pop_back();
		if (limbs_.empty())
			neg_ = false;
	}
	bool bit(size_t i) const
	{
		size_t limb = i / 32;
		if (limb >= limbs_.size())
			return false;
		return (limbs_[limb] >> (i % 32)) & 1u;
	}
	void shiftLeft1()
	{
		uint32_t carry = 0;
		for (auto &l : limbs_)
		{
			uint32_t next = l >> 31;
			l = (l << 1) | carry;
			carry = next;
		}
		if (carry)
			limbs_.push_back(carry);
	}
	void setBit0()
	{
		if (limbs_.empty())
			limbs_.push_back(1);
		else
			limbs_[0] |= 1u;
	}

	static BigInt addAbs(const BigInt &a, const BigInt &b)
	{
		BigInt r;
		size_t n = std::max(a.limbs_.size(), b.limbs_.size());
		r.limbs_.assign(n + 1, 0);
		uint64_t carry = 0;
		for (size_t i = 0; i < n; ++i)
		{
			uint64_t cur = carry;
			if (i < a.limbs_.size())
				cur += a.limbs_[i];
			if (i < b.limbs_.size())
				cur += b.limbs_[i];
			r.limbs_[i] = static_cast<uint32_t>(cur);
			carry = cur >> 32;
		}
		r.limbs_[n] = static_cast<uint32_t>(carry);
		r.trim();
		return r;
	}

	// requires |a| >= |b|
	static BigInt subAbs(const BigInt &a, const BigInt &b)
	{
		BigInt r;
		r.limbs_.assign(a.limbs_.size(), 0);
		int64_t borrow = 0;
		for (size_t i = 0; i < a.limbs_.size(); ++i)
		{
			int64_t cur = static_cast<int64_t>(a.limbs_[i]) - borrow -
			              (i < b.limbs_.size() ? b.limbs_[i] : 0);
			if (cur < 0)
			{
				cur += (int64_t(1) << 32);
				borrow = 1;
			}
			else
				borrow = 0;
			r.limbs_[i] = static_cast<uint32_t>(cur);
		}
		r.trim();
		return r;
	}
};

// Exact rational with reduced representation, denominator > 0.
class Rational {
  public:
	Rational() : num_(0), den_(1) {}
	Rational(int64_t n) : num_(n), den_(1) {}
	Rational(int64_t n, int64_t d) : num_(n), den_(d) { normalize(); }
	Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

	const BigInt &num() const { return num_; }
	const BigInt &den() const { return den_; }
	bool isZero() const { return num_.isZero(); }
	bool isOne() const { return num_ == BigInt(1) && den_ == BigInt(1); }
	bool isNegative() const { return num_.isNegative(); }

	friend Rational operator+(const Rational &a, const Rational &b)
	{
		return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
	}
	friend Rational operator-(const Rational &a, const Rational &b)
	{
		return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
	}
	friend Rational operator*(const Rational &a, const Rational &b)
	{
		return Rational(a.num_ * b.num_, a.den_ * b.den_);
	}
	friend Rational operator/(const Rational &a, const Rational &b)
	{
		if (b.isZero())
			throw std::domain_error("Rational: division by zero");
		return Rational(a.num_ * b.den_, a.den_ * b.num_);
	}
	friend Rational operator-(const Rational &a) { return Rational(-a.num_, a.den_); }

	Rational &operator+=(const Rational &b) { return *this = *this + b; }
	Rational &operator-=(const Rational &b) { return *this = *this - b; }
	Rational &operator*=(const Rational &b) { return *this = *this * b; }
	Rational &operator/=(const Rational &b) { return *this = *this / b; }

	friend bool operator==(const Rational &a, const Rational &b)
	{
		return a.num_ == b.num_ && a.den_ == b.den_;
	}
	friend bool operator!=(const Rational &a, const Rational &b) { return !(a == b); }
	friend bool operator<(const Rational &a, const Rational &b)
	{
		return BigInt::cmp(a.num_ * b.den_, b.num_ * a.den_) < 0;
	}

	std::string str() const
	{
		if (den_ == BigInt(1))
			return num_.str();
		return num_.str() + "/" + den_.str();
	}

	double toDouble() const { return num_.toDouble() / den_.toDouble(); }

  private:
	BigInt num_, den_;

	void normalize()
	{
		if (den_.isZero())
			throw std::domain_error("Rational: zero denominator");
		if (den_.isNegative())
		{
			num_ = -num_;
			den_ = -den_;
		}
		if (num_.isZero())
		{
			den_ = BigInt(1);
			return;
		}
		BigInt g = BigInt::gcd(num_, den_);
		if (!(g == BigInt(1)))
		{
			num_ = num_ / g;
			den_ = den_ / g;
		}
	}
};

} // namespace vpdw
