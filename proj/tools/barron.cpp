// barron <config> [--out DIR] [--workers N] [--seed S]
//
// Exit status: 0 when the experiment's criterion passes, 2 when it fails,
// 1 on configuration or I/O errors.
#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "barron/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral Barron space experiments"};
    std::string config_path;
    std::string out_dir = "barron_out";
    unsigned workers = 1;
    std::optional<std::uint64_t> seed;
    app.add_option("config", config_path, "experiment configuration (key = value)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", seed, "override the configured seed");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        auto cfg = barron::ExperimentConfig::load(config_path);
        if (seed) cfg.set("seed", std::to_string(*seed));
        const auto res = barron::run_experiment(cfg, workers);
        barron::write_artifacts(res, out_dir);
        if (cfg.kind() == "norms")
            for (const auto& [name, body] : res.tables) std::cout << body;
        std::cout << res.summary.str();
        return res.pass ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "barron: error: " << e.what() << '\n';
        return 1;
    }
}
