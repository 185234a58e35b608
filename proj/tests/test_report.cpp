#include "vpdw/report.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace vpdw;

TEST_CASE("report JSON: determinism and schema validity")
{
	Report r;
	r.command = "vpdw verify brst";
	r.inputsDigest = "123";
	r.seed = 42;
	r.verdicts.push_back(CheckResult::of("x.y", "a claim", true, "detail"));
	r.numerics.push_back({"omega_1", 5.6e-6, 1e-17, "closed", 120});
	auto j1 = r.toJson();
	auto j2 = r.toJson();
	CHECK(j1 == j2);

	std::ifstream schema(std::string(VPDW_SOURCE_DIR) + "/schema/report.schema.json");
	REQUIRE(schema.good());
	std::stringstream ss;
	ss << schema.rdbuf();
	std::string why;
	CHECK(validateReportJson(j1, ss.str(), &why));
	INFO(why);

	// a mangled report fails validation
	CHECK(!validateReportJson("{\"schema_version\": \"1\"}", ss.str(), &why));
}

TEST_CASE("suite registry")
{
	Config cfg;
	cfg.validate();
	CHECK_THROWS_AS(runSuite("nope", cfg), ExprError);
	auto rs = runSuite("divergence", cfg);
	CHECK(!rs.empty());
	for (auto &r : rs)
		CHECK(r.verdict == Verdict::Pass);
}

TEST_CASE("config validation")
{
	Config c;
	c.tolerance = -1;
	CHECK_THROWS_AS(c.validate(), ExprError);
	Config c2;
	c2.projector = "weird";
	CHECK_THROWS_AS(c2.validate(), ExprError);
}
