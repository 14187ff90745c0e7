#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>

#include "pdnsim/scenario.hpp"

using namespace pdnsim;

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulator for a peer-assisted video delivery network"};
    app.require_subcommand(1);

    CLI::App* list = app.add_subcommand("list", "print the available scenarios");

    std::string scenario;
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 1;
    std::vector<std::string> overrides;

    CLI::App* run = app.add_subcommand("run", "run one scenario and write its report");
    run->add_option("scenario", scenario, "scenario name, see `pdnsim list`")->required();
    run->add_option("--config", config_path, "JSON file merged over the scenario defaults");
    run->add_option("--seed", seed, "root seed; sub-runs derive their own")
        ->capture_default_str();
    run->add_option("--out", out_path, "report path (default stdout)");
    run->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    run->add_option("--set", overrides, "dotted config override, e.g. run.duration_ms=60000");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const ScenarioDef& def : scenarios())
            std::printf("%-24s %s\n", def.name.c_str(), def.description.c_str());
        return 0;
    }

    const ScenarioDef* def = find_scenario(scenario);
    if (!def) {
        std::fprintf(stderr, "pdnsim: unknown scenario '%s' (try `pdnsim list`)\n",
                     scenario.c_str());
        return 2;
    }

    try {
        Config cfg(def->defaults);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::fprintf(stderr, "pdnsim: cannot read config file '%s'\n",
                             config_path.c_str());
                return 2;
            }
            cfg.merge(json::parse(in));
        }
        for (const std::string& kv : overrides) cfg.set(kv);

        auto t0 = std::chrono::steady_clock::now();
        json report = run_scenario(*def, cfg, seed);
        double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();

        std::string text = format == "csv" ? render_csv(report) : render_json(report);
        if (out_path.empty()) {
            std::fwrite(text.data(), 1, text.size(), stdout);
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::fprintf(stderr, "pdnsim: cannot write '%s'\n", out_path.c_str());
                return 2;
            }
            out << text;
        }

        std::uint64_t events = 0;
        for (const auto& [label, r] : report.at("runs").items())
            events += r.at("world").at("events").get<std::uint64_t>();
        std::fprintf(stderr, "pdnsim: %s seed=%llu runs=%zu events=%llu wall=%.0fms\n",
                     def->name.c_str(), static_cast<unsigned long long>(seed),
                     report.at("runs").size(), static_cast<unsigned long long>(events), wall_ms);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "pdnsim: %s\n", e.what());
        return 2;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "pdnsim: config: %s\n", e.what());
        return 2;
    }
}
