// Experiment runner: tamed_cli <simulate|converge|moments|check> --config FILE [--threads K]

#include "tamed/cli.hpp"
#include "tamed/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace {

int fail(const nlohmann::json& j) {
    std::cerr << j.dump() << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tamed Euler-Maruyama experiments for neutral stochastic delay equations"};
    app.set_version_flag("--version", std::string(tamed::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    const std::pair<const char*, tamed::Mode> commands[] = {
        {"simulate", tamed::Mode::Simulate},
        {"converge", tamed::Mode::Converge},
        {"moments", tamed::Mode::Moments},
        {"check", tamed::Mode::Check},
    };
    for (const auto& [name, mode] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment file (YAML)")->required();
        sub->add_option("--threads", threads, "worker threads; does not change any output byte")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail({{"error", "UsageError"}, {"message", e.what()}});
    }

    tamed::Mode mode = tamed::Mode::Simulate;
    for (const auto& [name, m] : commands) {
        if (app.got_subcommand(name)) mode = m;
    }

    try {
        const tamed::ExperimentConfig cfg = tamed::load_config(config_path);
        for (const auto& path : tamed::run_mode(mode, cfg, {threads})) std::cout << path.string() << '\n';
    } catch (const tamed::Error& e) {
        return fail(tamed::error_json(e));
    } catch (const std::exception& e) {
        return fail({{"error", "InternalError"}, {"message", e.what()}});
    }
    return 0;
}
