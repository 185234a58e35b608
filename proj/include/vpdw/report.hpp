#pragma once

#include "vpdw/checks.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vpdw {

struct Config {
	double tolerance = 1e-10;
	int64_t mcSamples = 400000;
	uint64_t seed = 42;
	int ibpStepLimit = 20000;
	int mcShards = 8;
	std::string projector = "simplified";

	void validate() const;
	static Config fromJsonFile(const std::string &path);
};

struct NumericRow {
	std::string name;
	double value = 0;
	double error = 0;
	std::string method;
	int64_t evaluations = 0;
};

// A self-describing run record: the command line it reproduces under, an
// input digest, per-check verdicts with residual renderings, and numeric
// results. Serialization has stable field order; identical inputs and seed
// give byte-identical output (timing is reported separately).
struct Report {
	std::string schemaVersion = "1";
	std::string command;
	std::string inputsDigest;
	uint64_t seed = 0;
	std::vector<CheckResult> verdicts;
	std::vector<NumericRow> numerics;
	std::vector<std::string> notes;
	std::string toolVersion;

	bool allPass() const;
	std::string toJson() const;
	std::string toText() const;
};

uint64_t fnv1a(const std::string &s);

// structural validation against the shipped schema description
bool validateReportJson(const std::string &reportJson, const std::string &schemaJson,
                        std::string *why = nullptr);

// named verification suites aggregating the transform-layer checks
std::vector<std::string> suiteNames();
std::vector<CheckResult> runSuite(const std::string &name, const Config &cfg);

extern const char *toolVersionString;

} // namespace vpdw
