#include "vpdw/parser.hpp"

#include "vpdw/calculus.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace vpdw {

namespace {

struct AtomSpec {
	Species species;
	std::vector<IndexKind> kinds;
};

const std::map<std::string, AtomSpec> &reservedAtoms()
{
	static const std::map<std::string, AtomSpec> table = {
	    {"A", {Species::GaugeA, {IndexKind::Spacetime, IndexKind::Inner}}},
	    {"w", {Species::Ghost, {IndexKind::Inner}}},
	    {"ws", {Species::AntiGhost, {IndexKind::Inner}}},
	    {"h", {Species::NL, {IndexKind::Inner}}},
	    {"psi", {Species::Matter, {}}},
	    {"E", {Species::GaugeParam, {IndexKind::Inner}}},
	    {"F", {Species::GaugeParam, {IndexKind::Inner}}},
	    {"Ep", {Species::ResidualParam, {IndexKind::Inner}}},
	    {"W", {Species::InnerRotation, {IndexKind::Inner, IndexKind::Inner}}},
	    {"theta", {Species::Theta, {}}},
	    {"thetap", {Species::Theta, {}}},
	};
	return table;
}

class Parser {
  public:
	explicit Parser(const std::string &text) : s_(text) {}

	Expression run()
	{
		Expression e = parseExpr();
		skipWs();
		if (pos_ != s_.size())
			fail("trailing input");
		return canonicalize(e);
	}

  private:
	const std::string &s_;
	size_t pos_ = 0;

	[[noreturn]] void fail(const std::string &msg) { throw ParseError(msg, pos_); }

	void skipWs()
	{
		while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
			++pos_;
	}
	bool eat(char c)
	{
		skipWs();
		if (pos_ < s_.size() && s_[pos_] == c)
		{
			++pos_;
			return true;
		}
		return false;
	}
	void expect(char c)
	{
		if (!eat(c))
			fail(std::string("expected '") + c + "'");
	}
	char peek()
	{
		skipWs();
		return pos_ < s_.size() ? s_[pos_] : '\0';
	}

	std::string ident()
	{
		skipWs();
		size_t b = pos_;
		// '@' is reserved for rule-template placeholders
		while (pos_ < s_.size() &&
		       (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
		        s_[pos_] == '@'))
			++pos_;
		if (b == pos_)
			fail("expected identifier");
		return s_.substr(b, pos_ - b);
	}

	int64_t integer()
	{
		skipWs();
		size_t b = pos_;
		if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+'))
			++pos_;
		while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
			++pos_;
		if (b == pos_)
			fail("expected integer");
		return std::stoll(s_.substr(b, pos_ - b));
	}

	Index index(IndexKind kind)
	{
		skipWs();
		Variance v = Variance::Upper;
		if (pos_ < s_.size() && s_[pos_] == '.')
		{
			v = Variance::Lower;
			++pos_;
		}
		return Index::ext(kind, v, ident());
	}

	Expression parseExpr()
	{
		Expression acc;
		bool neg = eat('-');
		acc = parseTerm();
		if (neg)
			acc = -acc;
		while (true)
		{
			skipWs();
			if (eat('+'))
				acc = acc + parseTerm();
			else if (eat('-'))
				acc = acc - parseTerm();
			else
				return acc;
		}
	}

	// free labels of an expression (empty for the zero expression)
	static std::map<std::string, int> freeLabels(const Expression &e)
	{
		std::map<std::string, int> out;
		if (e.isZero())
			return out;
		const Monomial &m = e.terms.front();
		for (const auto &a : m.atoms)
			for (const auto *lst : {&a.idx, &a.dst, &a.din})
				for (const auto &ix : *lst)
					if (!ix.isDummy())
						out[ix.name]++;
		return out;
	}

	Expression parseTerm()
	{
		// contraction scope is the flat factor chain: a label open in three
		// or more factors of one term is malformed
		std::map<std::string, int> open;
		auto account = [&](const Expression &f) {
			for (auto &[n, c] : freeLabels(f))
			{
				open[n] += c;
				if (open[n] > 2)
					fail("index label '" + n + "' occurs more than twice in a term");
			}
		};
		Expression acc = parseFactor();
		account(acc);
		while (eat('*'))
		{
			Expression f = parseFactor();
			account(f);
			acc = acc * f;
		}
		return acc;
	}

	Expression parseFactor()
	{
		skipWs();
		if (pos_ >= s_.size())
			fail("unexpected end of input");
		char c = s_[pos_];
		if (c == '(')
		{
			++pos_;
			Expression e = parseExpr();
			expect(')');
			return e;
		}
		if (c == '-')
		{
			++pos_;
			return -parseFactor();
		}
		if (std::isdigit(static_cast<unsigned char>(c)))
		{
			int64_t num = integer();
			int64_t den = 1;
			if (eat('/'))
				den = integer();
			if (den == 0)
				fail("zero denominator");
			return constantExpr(Rational(num, den));
		}
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
			return parseNamed();
		fail("unexpected character");
	}

	Expression parseNamed()
	{
		std::string name = ident();
		if (name == "d" || name == "nab")
		{
			IndexKind kind = name == "d" ? IndexKind::Spacetime : IndexKind::Inner;
			expect('[');
			Index d = index(kind);
			expect(']');
			expect('(');
			Expression inner = parseExpr();
			expect(')');
			return derive(inner, d);
		}
		if (peek() == '[')
		{
			expect('[');
			std::vector<Index> idxs;
			auto it = reservedAtoms().find(name);
			size_t slot = 0;
			auto slotKind = [&](size_t k) {
				if (it == reservedAtoms().end())
					return IndexKind::Inner; // constant tensors live in inner space
				if (k >= it->second.kinds.size())
					fail("too many indices on atom " + name);
				return it->second.kinds[k];
			};
			idxs.push_back(index(slotKind(slot++)));
			while (eat(','))
				idxs.push_back(index(slotKind(slot++)));
			expect(']');
			Atom a;
			if (it != reservedAtoms().end())
			{
				if (idxs.size() != it->second.kinds.size())
					fail("atom " + name + " expects " +
					     std::to_string(it->second.kinds.size()) + " indices");
				a.species = it->second.species;
			}
			else
				a.species = Species::ConstTensor;
			a.name = name;
			a.idx = std::move(idxs);
			return atomExpr(std::move(a));
		}
		auto it = reservedAtoms().find(name);
		if (it != reservedAtoms().end())
		{
			if (!it->second.kinds.empty())
				fail("atom " + name + " requires indices");
			Atom a;
			a.species = it->second.species;
			a.name = name;
			return atomExpr(std::move(a));
		}
		// named scalar coefficient, optionally with an integer power
		int pow = 1;
		if (eat('^'))
			pow = static_cast<int>(integer());
		return constantExpr(Rational(1), SymProd(name, pow));
	}
};

std::string indexStr(const Index &ix, const std::map<int, std::string> &dummyNames)
{
	std::string s = ix.var == Variance::Lower ? "." : "";
	if (ix.isDummy())
		return s + dummyNames.at(ix.dummy);
	return s + ix.name;
}

} // namespace

Expression parse(const std::string &text) { return Parser(text).run(); }

std::string print(const Monomial &m)
{
	// names for contracted pairs, avoiding clashes with free labels
	std::set<std::string> used;
	for (const auto &a : m.atoms)
	{
		auto scan = [&](const std::vector<Index> &v) {
			for (auto &ix : v)
				if (!ix.isDummy())
					used.insert(ix.name);
		};
		scan(a.idx);
		scan(a.dst);
		scan(a.din);
	}
	std::map<int, std::string> dummyNames;
	int counter = 1;
	for (const auto &a : m.atoms)
	{
		auto scan = [&](const std::vector<Index> &v) {
			for (auto &ix : v)
				if (ix.isDummy() && !dummyNames.count(ix.dummy))
				{
					std::string n;
					do
						n = "i" + std::to_string(counter++);
					while (used.count(n));
					dummyNames[ix.dummy] = n;
				}
		};
		scan(a.idx);
		scan(a.dst);
		scan(a.din);
	}

	std::vector<std::string> pieces;
	if (!m.sym.isOne())
		for (auto &[n, p] : m.sym.exps())
			pieces.push_back(p == 1 ? n : n + "^" + std::to_string(p));
	for (const auto &a : m.atoms)
	{
		std::string core = a.name;
		if (!a.idx.empty())
		{
			core += "[";
			for (size_t i = 0; i < a.idx.size(); ++i)
				core += (i ? "," : "") + indexStr(a.idx[i], dummyNames);
			core += "]";
		}
		for (auto it = a.din.rbegin(); it != a.din.rend(); ++it)
			core = "nab[" + indexStr(*it, dummyNames) + "](" + core + ")";
		for (auto it = a.dst.rbegin(); it != a.dst.rend(); ++it)
			core = "d[" + indexStr(*it, dummyNames) + "](" + core + ")";
		pieces.push_back(core);
	}

	Rational c = m.coeff;
	std::string s;
	bool needCoeff = pieces.empty() || !(c.isOne() || (-c).isOne());
	if (c.isNegative() && !pieces.empty() && (-c).isOne() && !needCoeff)
		s = "-";
	else if (needCoeff)
	{
		s = c.str();
		if (!pieces.empty())
			s += "*";
	}
	for (size_t i = 0; i < pieces.size(); ++i)
		s += (i ? "*" : "") + pieces[i];
	return s;
}

std::string print(const Expression &e)
{
	if (e.isZero())
		return "0";
	std::string s;
	for (size_t i = 0; i < e.terms.size(); ++i)
	{
		Monomial m = e.terms[i];
		if (i == 0)
		{
			s = print(m);
			continue;
		}
		if (m.coeff.isNegative())
		{
			m.coeff = -m.coeff;
			s += " - " + print(m);
		}
		else
			s += " + " + print(m);
	}
	return s;
}

} // namespace vpdw
