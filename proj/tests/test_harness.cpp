#include "pinlab/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace pinlab;
namespace fs = std::filesystem;

TEST_CASE("config validation: unknown and missing keys fail by name") {
    harness::json cfg{{"n_max", 100}, {"bogus", 1}};
    CHECK_THROWS_WITH_AS(harness::run("kernels", cfg),
                         doctest::Contains("unknown key 'bogus'"), std::invalid_argument);
    harness::json cfg2 = harness::json::object();
    CHECK_THROWS_WITH_AS(harness::run("kernels", cfg2),
                         doctest::Contains("missing required key 'n_max'"),
                         std::invalid_argument);
}

TEST_CASE("kernels run produces a manifest and csv; validate-walk passes") {
    const std::string dir = "test_out_kernels";
    fs::remove_all(dir);
    harness::json cfg{{"n_max", 500}, {"out_dir", dir}};
    auto res = harness::run("kernels", cfg);
    CHECK(res.all_pass);
    CHECK(fs::exists(dir + "/kernels.csv"));
    CHECK(fs::exists(res.manifest_path));
    std::ifstream is(res.manifest_path);
    auto m = harness::json::parse(is);
    CHECK(m["subcommand"] == "kernels");
    CHECK(m["all_pass"].get<bool>());

    auto vw = harness::run("validate-walk", harness::json{{"out_dir", dir}});
    CHECK(vw.all_pass);

    auto rep = harness::report(dir);
    CHECK(rep.find("kernels") != std::string::npos);
    CHECK(rep.find("ok") != std::string::npos);
}

TEST_CASE("ensemble outputs are byte-identical across worker counts") {
    const std::string d1 = "test_out_w1", d3 = "test_out_w3";
    fs::remove_all(d1);
    fs::remove_all(d3);
    harness::json base{{"N", 256}, {"samples", 200}, {"seed", 31}};
    auto c1 = base;
    c1["out_dir"] = d1;
    c1["workers"] = 1;
    auto c3 = base;
    c3["out_dir"] = d3;
    c3["workers"] = 3;
    harness::run("moments", c1);
    harness::run("moments", c3);
    auto slurp = [](const std::string& p) {
        std::ifstream is(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(is)),
                           std::istreambuf_iterator<char>());
    };
    CHECK(slurp(d1 + "/polymer_samples.csv") == slurp(d3 + "/polymer_samples.csv"));
    CHECK(!slurp(d1 + "/polymer_samples.csv").empty());
}

TEST_CASE("schema listing covers all subcommands") {
    for (const auto& s : harness::subcommands())
        if (s != "report") CHECK(harness::schema(s).contains("seed"));
}
