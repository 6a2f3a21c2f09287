#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace pinlab::harness {

using json = nlohmann::json;

// One named check inside an experiment run.
struct Assertion {
    std::string name;
    bool pass = false;
    double value = 0;
    double threshold = 0;
    std::string detail;
};

struct RunResult {
    json manifest;
    bool all_pass = true;
    std::string manifest_path;
};

// Validates the config against the subcommand schema (unknown keys rejected,
// missing required keys reported by name), runs the experiment, writes CSV
// outputs plus manifest_<subcommand>_<hash>.json into out_dir.
RunResult run(const std::string& subcommand, json config);

// Table of known subcommands.
std::vector<std::string> subcommands();

// Aggregates all manifest_*.json files under dir into a pass/fail table
// (returned as printable text; also written to report.csv in dir).
std::string report(const std::string& dir);

// Schema echo for --help style listings.
json schema(const std::string& subcommand);

} // namespace pinlab::harness
