#include "vpdw/report.hpp"

#include "vpdw/basis.hpp"
#include "vpdw/constraints.hpp"
#include "vpdw/parser.hpp"

#include <json.hpp>

#include <fstream>
#include <future>
#include <sstream>

namespace vpdw {

const char *toolVersionString = "vpdw 1.0.0";

void Config::validate() const
{
	if (tolerance <= 0)
		throw ExprError("tolerance must be positive");
	if (mcSamples <= 0 || mcShards <= 0)
		throw ExprError("sample and shard counts must be positive");
	if (ibpStepLimit <= 0)
		throw ExprError("step limit must be positive");
	if (projector != "simplified" && projector != "full")
		throw ExprError("projector must be 'simplified' or 'full'");
}

Config Config::fromJsonFile(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw ExprError("cannot read config file " + path);
	nlohmann::json j = nlohmann::json::parse(in);
	Config c;
	c.tolerance = j.value("tolerance", c.tolerance);
	c.mcSamples = j.value("mc_samples", c.mcSamples);
	c.seed = j.value("seed", c.seed);
	c.ibpStepLimit = j.value("ibp_step_limit", c.ibpStepLimit);
	c.mcShards = j.value("mc_shards", c.mcShards);
	c.projector = j.value("projector", c.projector);
	c.validate();
	return c;
}

uint64_t fnv1a(const std::string &s)
{
	uint64_t h = 1469598103934665603ull;
	for (unsigned char c : s)
	{
		h ^= c;
		h *= 1099511628211ull;
	}
	return h;
}

bool Report::allPass() const
{
	for (auto &v : verdicts)
		if (v.verdict != Verdict::Pass)
			return false;
	return true;
}

std::string Report::toJson() const
{
	nlohmann::ordered_json j;
	j["schema_version"] = schemaVersion;
	j["tool"] = toolVersion.empty() ? toolVersionString : toolVersion;
	j["command"] = command;
	j["inputs_digest"] = inputsDigest;
	j["seed"] = seed;
	j["verdicts"] = nlohmann::ordered_json::array();
	for (auto &v : verdicts)
	{
		nlohmann::ordered_json row;
		row["id"] = v.id;
		row["claim"] = v.claim;
		row["verdict"] = verdictName(v.verdict);
		row["detail"] = v.detail;
		j["verdicts"].push_back(row);
	}
	j["numerics"] = nlohmann::ordered_json::array();
	for (auto &n : numerics)
	{
		nlohmann::ordered_json row;
		row["name"] = n.name;
		std::ostringstream ov, oe;
		ov.precision(12);
		ov << std::scientific << n.value;
		oe.precision(3);
		oe << std::scientific << n.error;
		row["value"] = ov.str();
		row["error"] = oe.str();
		row["method"] = n.method;
		row["evaluations"] = n.evaluations;
		j["numerics"].push_back(row);
	}
	j["notes"] = notes;
	return j.dump(2) + "\n";
}

std::string Report::toText() const
{
	std::ostringstream os;
	os << (toolVersion.empty() ? toolVersionString : toolVersion) << "\n";
	os << "command: " << command << "\n";
	for (auto &v : verdicts)
		os << "  [" << verdictName(v.verdict) << "] " << v.id << ": " << v.claim
		   << (v.detail.empty() ? "" : "\n        " + v.detail) << "\n";
	for (auto &n : numerics)
	{
		os.precision(12);
		os << "  " << n.name << " = " << std::scientific << n.value << " +- " << n.error
		   << " (" << n.method << ", " << n.evaluations << " evaluations)\n";
	}
	for (auto &n : notes)
		os << "  note: " << n << "\n";
	return os.str();
}

bool validateReportJson(const std::string &reportJson, const std::string &schemaJson,
                        std::string *why)
{
	auto fail = [&](const std::string &msg) {
		if (why)
			*why = msg;
		return false;
	};
	nlohmann::json rep, schema;
	try
	{
		rep = nlohmann::json::parse(reportJson);
		schema = nlohmann::json::parse(schemaJson);
	}
	catch (const std::exception &e)
	{
		return fail(e.what());
	}
	for (auto &req : schema.at("required"))
		if (!rep.contains(req.get<std::string>()))
			return fail("missing field " + req.get<std::string>());
	auto &props = schema.at("properties");
	for (auto it = rep.begin(); it != rep.end(); ++it)
	{
		if (!props.contains(it.key()))
			return fail("unexpected field " + it.key());
		std::string type = props.at(it.key()).value("type", "any");
		const auto &v = it.value();
		bool ok = type == "any" || (type == "string" && v.is_string()) ||
		          (type == "integer" && v.is_number_integer()) ||
		          (type == "array" && v.is_array());
		if (!ok)
			return fail("field " + it.key() + " has wrong type");
	}
	return true;
}

std::vector<std::string> suiteNames()
{
	return {"gauge",    "brst",     "reduced-brst", "general-brst", "algebra",
	        "kernel",   "jacobian", "divergence",   "action",       "counterterm"};
}

std::vector<CheckResult> runSuite(const std::string &name, const Config &cfg)
{
	if (name == "gauge")
	{
		// covariance of the field strength plus invariance under the
		// residual (metric-preserving) parameter family
		auto out = checkFieldStrength();
		auto res = checkActionInvariance("gauge.action.residual", lagrangianFsq(),
		                                 gaugeResidualRules(), cfg.ibpStepLimit);
		out.push_back(res.check);
		return out;
	}
	if (name == "brst")
	{
		// the full fermionic-symmetry family: nilpotency, the divergence
		// conditions, and the measure supertrace
		auto out = checkNilpotency(brstRules());
		for (auto &c : checkDivergencePreservation(brstRules()))
			out.push_back(c);
		auto st = jacobianSupertrace(brstRules());
		out.push_back(CheckResult::of("brst.jacobian_supertrace",
		                              "coincident-point supertrace vanishes", st.pass));
		return out;
	}
	if (name == "reduced-brst")
		return checkNilpotency(reducedBrstRules());
	if (name == "general-brst")
		return solveRuleConstraints().checks;
	if (name == "algebra")
	{
		auto out = checkAlgebraClosure();
		for (auto &c : checkFieldStrength())
			out.push_back(c);
		return out;
	}
	if (name == "kernel")
		return checkFpKernel();
	if (name == "jacobian")
	{
		auto rep = jacobianSupertrace(brstRules());
		std::vector<CheckResult> out;
		for (auto &t : rep.terms)
			out.push_back(CheckResult::of("jacobian." + t.block,
			                              t.block + "-block term " + t.rendering,
			                              t.vanishes, t.reason));
		out.push_back(CheckResult::of("jacobian.supertrace",
		                              "coincident-point supertrace vanishes", rep.pass));
		return out;
	}
	if (name == "divergence")
		return checkDivergencePreservation(brstRules());
	if (name == "action")
	{
		std::vector<CheckResult> out;
		auto fsq = checkActionInvariance("action.fsq.gauge", lagrangianFsq(), gaugeRules(),
		                                 cfg.ibpStepLimit);
		out.push_back(fsq.check);
		auto res = checkActionInvariance("action.fsq.residual", lagrangianFsq(),
		                                 gaugeResidualRules(), cfg.ibpStepLimit);
		out.push_back(res.check);
		auto lnew = checkActionInvariance("action.lnew.brst", lagrangianNew(), brstRules(),
		                                  cfg.ibpStepLimit);
		out.push_back(lnew.check);
		auto ghost = checkActionInvariance(
		    "action.ghost_sector.brst",
		    parse("-d[.mu](ws[.al])*d[mu](w[al])"
		          " - d[.mu](ws[.al])*(A[mu,.be]*nab[be](w[al]) - w[be]*nab[.be](A[mu,al]))"
		          " + h[.al]*d[mu](A[.mu,al]) + 1/2*xi*h[.al]*h[al]"),
		    brstRules(), cfg.ibpStepLimit);
		out.push_back(ghost.check);
		return out;
	}
	if (name == "counterterm")
	{
		auto sol = solveCountertermConstraints();
		auto out = sol.checks;
		for (auto &c : matchToBare(sol).checks)
			out.push_back(c);
		return out;
	}
	throw ExprError("unknown suite '" + name + "'");
}

} // namespace vpdw
