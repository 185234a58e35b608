#include "vpdw/basis.hpp"
#include "vpdw/constraints.hpp"
#include "vpdw/feynman.hpp"
#include "vpdw/parser.hpp"
#include "vpdw/regulator.hpp"
#include "vpdw/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

using namespace vpdw;

namespace {

int emitAndExit(Report &rep, const std::string &jsonPath, bool text)
{
	if (!jsonPath.empty())
	{
		std::ofstream out(jsonPath);
		if (!out)
		{
			std::cerr << "cannot write " << jsonPath << "\n";
			return 2;
		}
		out << rep.toJson();
	}
	if (text || jsonPath.empty())
		std::cout << rep.toText();
	return rep.allPass() ? 0 : 1;
}

Config loadConfig(const std::string &explicitPath)
{
	std::string path = explicitPath;
	if (path.empty())
		if (const char *env = std::getenv("VPDW_CONFIG"))
			path = env;
	if (path.empty())
		return Config{};
	return Config::fromJsonFile(path);
}

std::string joinArgs(int argc, char **argv)
{
	std::string s;
	for (int i = 0; i < argc; ++i)
		s += std::string(i ? " " : "") + argv[i];
	return s;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"workbench for the gauge theory of volume-preserving diffeomorphisms"};
	app.require_subcommand(1);
	app.fallthrough();

	std::string configPath, jsonPath;
	bool textOut = false;
	app.add_option("--config", configPath, "JSON config file (env VPDW_CONFIG)");
	app.add_option("--json", jsonPath, "write the JSON report to this path");
	app.add_flag("--text", textOut, "print the text rendering as well");

	// verify
	auto *verify = app.add_subcommand("verify", "run a named identity suite");
	std::string suite = "all";
	verify->add_option("suite", suite,
	                   "suite name (" + [] {
		                   std::string s;
		                   for (auto &n : suiteNames())
			                   s += n + " ";
		                   return s + "or all)";
	                   }());

	// basis
	auto *basis = app.add_subcommand("basis", "counterterm basis operations");
	auto *bEnum = basis->add_subcommand("enumerate", "enumerate sector operators");
	std::string sector = "ghost";
	int maxDim = 4;
	bEnum->add_option("--sector", sector, "ghost | nl | gauge");
	bEnum->add_option("--max-dim", maxDim, "dimension bound");
	auto *bSolve = basis->add_subcommand("solve", "solve the counterterm constraints");
	auto *bMatch = basis->add_subcommand("match", "match the solved terms to the bare Lagrangian");

	// feynman
	auto *fey = app.add_subcommand("feynman", "momentum-space rules and diagrams");
	auto *fContract = fey->add_subcommand("contract", "contract a diagram file");
	std::string diagramPath;
	std::vector<std::string> reduceLoops;
	fContract->add_option("--diagram", diagramPath, "diagram JSON file")->required();
	fContract->add_option("--reduce", reduceLoops, "inner loop momenta to reduce");
	auto *fRules = fey->add_subcommand("rules", "print the rules and their scale check");

	// omega
	auto *om = app.add_subcommand("omega", "regularized shell integrals");
	int kMax = 4;
	std::string method = "closed";
	double tol = 1e-10;
	uint64_t seed = 42;
	int64_t samples = 400000;
	double lambda = 1.0;
	bool bless = false;
	std::string goldenPath = "data/omega_golden.json";
	om->add_option("--k", kMax, "highest shell power");
	om->add_option("--method", method, "closed | oracle | mc");
	om->add_option("--tol", tol, "relative tolerance");
	om->add_option("--seed", seed, "Monte Carlo seed");
	om->add_option("--samples", samples, "Monte Carlo samples");
	om->add_option("--lambda", lambda, "internal scale of the oracle");
	om->add_flag("--bless", bless, "regenerate the golden file");
	om->add_option("--golden", goldenPath, "golden file path");

	// beta
	auto *beta = app.add_subcommand("beta", "one-loop beta functions");
	std::string model = "pure";
	double g = 0.1;
	beta->add_option("--model", model, "pure | sm");
	beta->add_option("--g", g, "coupling");

	// report
	auto *reportCmd = app.add_subcommand("report", "run every suite and the numerics");

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError &e)
	{
		int code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	Report rep;
	rep.command = joinArgs(argc, argv);
	try
	{
		Config cfg = loadConfig(configPath);
		rep.seed = seed;

		if (*verify)
		{
			std::vector<std::string> names =
			    suite == "all" ? suiteNames() : std::vector<std::string>{suite};
			// suites are independent; evaluate concurrently, collect in order
			std::vector<std::future<std::vector<CheckResult>>> futs;
			for (auto &n : names)
				futs.push_back(std::async(std::launch::async,
				                          [&, n] { return runSuite(n, cfg); }));
			for (size_t i = 0; i < names.size(); ++i)
				for (auto &c : futs[i].get())
					rep.verdicts.push_back(c);
			rep.inputsDigest = std::to_string(fnv1a(suite));
			return emitAndExit(rep, jsonPath, textOut);
		}
		if (*bEnum)
		{
			auto res = enumerateOperators(sector == "nl" ? "nl" : sector, maxDim);
			rep.inputsDigest = std::to_string(fnv1a(sector + std::to_string(maxDim)));
			for (auto &t : res.terms)
				rep.notes.push_back("operator: " + t.rendering);
			rep.verdicts.push_back(CheckResult::of(
			    "basis.enumerate." + sector,
			    "sector enumerated", true,
			    std::to_string(res.terms.size()) + " operators"));
			return emitAndExit(rep, jsonPath, textOut);
		}
		if (*bSolve || *bMatch)
		{
			auto sol = solveCountertermConstraints();
			rep.inputsDigest = std::to_string(fnv1a("counterterm"));
			rep.verdicts = sol.checks;
			for (auto &s : sol.solved)
				rep.notes.push_back("solved: " + s);
			if (*bMatch)
			{
				auto match = matchToBare(sol);
				for (auto &c : match.checks)
					rep.verdicts.push_back(c);
				for (auto &r : match.rows)
					rep.notes.push_back("match: " + r.bareTerm + " -> " + r.constant +
					                    (r.rescaledInner ? " (rescaled inner derivative)"
					                                     : "") +
					                    (r.shapeLevel ? " (shape level)" : ""));
			}
			return emitAndExit(rep, jsonPath, textOut);
		}
		if (*fContract)
		{
			std::ifstream in(diagramPath);
			if (!in)
			{
				std::cerr << "cannot read " << diagramPath << "\n";
				return 2;
			}
			std::stringstream ss;
			ss << in.rdbuf();
			auto d = diagramFromJson(ss.str());
			auto res = contractDiagram(d);
			rep.inputsDigest = std::to_string(fnv1a(ss.str()));
			MomTensor t = res.tensor;
			for (auto &loop : reduceLoops)
				t = reduceInner(t, loop, res.registry);
			rep.notes.push_back("contraction: " + momPrint(t));
			bool weightsOk = true;
			for (int w : momScaleWeights(res.tensor, res.registry))
				weightsOk = weightsOk && w == 0;
			rep.verdicts.push_back(CheckResult::of("feynman.scale_weight",
			                                       "every term is scale invariant",
			                                       weightsOk));
			return emitAndExit(rep, jsonPath, textOut);
		}
		if (*fRules)
		{
			MomentumRegistry reg;
			for (auto n : {"p1", "p2"})
				reg.add(n, false);
			for (auto n : {"P1", "P2"})
				reg.add(n, true);
			VertexLeg l0{{{"p1", Rational(1)}}, {{"P1", Rational(1)}}, "m0", "a0"};
			VertexLeg l1{{{"p2", Rational(1)}}, {{"P2", Rational(1)}}, "m1", "a1"};
			VertexLeg l2{{{"p1", Rational(-1)}, {"p2", Rational(-1)}},
			             {{"P1", Rational(-1)}, {"P2", Rational(-1)}},
			             "m2",
			             "a2"};
			auto v3 = vertexAAA({l0, l1, l2});
			rep.notes.push_back("three-boson vertex: " + momPrint(v3));
			bool ok = true;
			for (int w : momScaleWeights(v3, reg))
				ok = ok && w == 0;
			auto prop = gaugePropagator("p1", "P1", "mu", "nu", "al", "be",
			                            ProjectorMode::Full);
			rep.notes.push_back("gauge propagator: " + momPrint(prop));
			for (int w : momScaleWeights(prop, reg))
				ok = ok && w == 0;
			// the ghost vertex ships in both readings: the literal printed
			// index structure (with its dangling label) and the consistent one
			VertexLeg g1{{{"p1", Rational(1)}}, {{"P1", Rational(1)}}, "", "ga"};
			VertexLeg g2{{{"p2", Rational(1)}}, {{"P2", Rational(1)}}, "", "de"};
			rep.notes.push_back(
			    "ghost vertex (as printed): " +
			    momPrint(vertexGhostA({g1, g2, l2}, GhostVertexVariant::AsPrinted)));
			rep.notes.push_back(
			    "ghost vertex (index consistent): " +
			    momPrint(vertexGhostA({g1, g2, l2}, GhostVertexVariant::IndexConsistent)));
			rep.verdicts.push_back(CheckResult::of("feynman.scale_weight",
			                                       "rules are scale invariant", ok));
			rep.inputsDigest = std::to_string(fnv1a("rules"));
			return emitAndExit(rep, jsonPath, textOut);
		}
		if (*om)
		{
			if (method != "closed" && method != "oracle" && method != "mc")
			{
				std::cerr << "unknown method\n";
				return 2;
			}
			if (tol < 1e-14)
			{
				std::cerr << "tolerance below double-precision reach\n";
				return 2;
			}
			OmegaTable table;
			try
			{
				table = computeOmegaTable(kMax, method, tol, samples, seed);
			}
			catch (const ExprError &e)
			{
				std::cerr << e.what() << "\n";
				return 3;
			}
			for (auto &e : table.entries)
				rep.numerics.push_back({"omega_" + std::to_string(e.k), e.value, e.error,
				                        e.method, e.evaluations});
			auto cmp = omegaOneComparison();
			rep.notes.push_back("quoted-value comparison: computed/quoted = " +
			                    cmp.factor.str() + " exactly");
			rep.inputsDigest = std::to_string(fnv1a(method + std::to_string(kMax)));
			if (bless)
			{
				std::ofstream out(goldenPath);
				if (!out)
				{
					std::cerr << "cannot write " << goldenPath << "\n";
					return 2;
				}
				out << table.toJson();
				rep.notes.push_back("golden file written: " + goldenPath);
			}
			rep.verdicts.push_back(
			    CheckResult::of("omega.computed", "table computed to tolerance", true));
			return emitAndExit(rep, jsonPath, textOut);
		}
		if (*beta)
		{
			double omega1 = omegaClosed(1, tol).value;
			double b = model == "pure" ? betaPure(g, omega1) : betaSm(g, omega1);
			rep.numerics.push_back({"beta_" + model, b, 0.0, "closed-omega1", 0});
			rep.numerics.push_back({"omega_1", omega1, 0.0, "closed", 0});
			rep.verdicts.push_back(CheckResult::of(
			    "beta.sign",
			    model == "pure" ? "pure-gauge coupling decreases at high energy"
			                    : "full-model coupling increases at high energy",
			    model == "pure" ? b < 0 : b > 0));
			rep.inputsDigest = std::to_string(fnv1a(model + std::to_string(g)));
			return emitAndExit(rep, jsonPath, textOut);
		}
		if (*reportCmd)
		{
			for (auto &n : suiteNames())
				for (auto &c : runSuite(n, cfg))
					rep.verdicts.push_back(c);
			auto table = computeOmegaTable(4, "closed", cfg.tolerance, cfg.mcSamples,
			                               cfg.seed);
			for (auto &e : table.entries)
				rep.numerics.push_back({"omega_" + std::to_string(e.k), e.value, e.error,
				                        e.method, e.evaluations});
			rep.inputsDigest = std::to_string(fnv1a("report"));
			return emitAndExit(rep, jsonPath, textOut);
		}
	}
	catch (const ExprError &e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
	std::cerr << "no subcommand\n";
	return 2;
}
