// Command-line front end: subcommand + config file + flag overrides.
#include "pinlab/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"pinlab: numerics for critical disordered pinning models"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;

    for (const auto& name : pinlab::harness::subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--set", sets,
                        "key=value overrides (repeatable); values parsed as JSON "
                        "when possible");
        if (name == "report") sub->add_option("--dir", config_path, "manifest directory");
    }

    CLI11_PARSE(app, argc, argv);
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();

    nlohmann::json cfg = nlohmann::json::object();
    try {
        if (name == "report") {
            if (!config_path.empty()) cfg["dir"] = config_path;
        } else if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) {
                std::cerr << "cannot open config " << config_path << "\n";
                return 2;
            }
            cfg = nlohmann::json::parse(is);
        }
        for (const auto& kv : sets) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::cerr << "--set expects key=value, got " << kv << "\n";
                return 2;
            }
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            try {
                cfg[key] = nlohmann::json::parse(val);
            } catch (...) {
                cfg[key] = val; // plain string
            }
        }
        auto res = pinlab::harness::run(name, cfg);
        if (name == "report") {
            std::cout << res.manifest["report"].get<std::string>();
            return 0;
        }
        for (const auto& a : res.manifest["assertions"]) {
            std::cout << (a["pass"].get<bool>() ? "[PASS] " : "[FAIL] ")
                      << a["name"].get<std::string>() << "  value="
                      << a["value"].get<double>() << " threshold="
                      << a["threshold"].get<double>() << "\n";
        }
        if (!res.manifest_path.empty())
            std::cout << "manifest: " << res.manifest_path << "\n";
        return res.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
