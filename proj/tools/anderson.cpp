// Command-line front end: anderson <task> --config PATH [--seed] [--workers] [--out] [--plot]
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "anderson/run.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

anderson::ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw anderson::ConfigError({{0, "", "cannot read config file '" + path + "'"}});
    std::ostringstream text;
    text << in.rdbuf();
    return anderson::parse_config(text.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-particle Anderson model experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> out;
    bool plot = false;

    const std::pair<const char*, std::optional<anderson::TaskKind>> commands[] = {
        {"msa", anderson::TaskKind::Msa},
        {"decay", anderson::TaskKind::Decay},
        {"moment", anderson::TaskKind::Moment},
        {"spectrum", anderson::TaskKind::Spectrum},
        {"validate", std::nullopt},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, task] : commands) {
        auto* sub = app.add_subcommand(name, task ? std::string("run the ") + name + " task"
                                                  : "parse and check a config, print its canonical form");
        sub->add_option("--config", config_path, "config file")->required();
        if (task) {
            sub->add_option("--seed", seed, "master seed, overrides run.master_seed");
            sub->add_option("--workers", workers, "worker threads (0 = auto)");
            sub->add_option("--out", out, "output directory, overrides run.output");
            sub->add_flag("--plot", plot, "also write plot data files");
        }
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        auto config = load(config_path);
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (!subs[i]->parsed())
                continue;
            const auto task = commands[i].second;
            if (!task) {
                if (config.task.kind)
                    anderson::validate_config(config, *config.task.kind);
                std::cout << anderson::print_config(config);
                return 0;
            }
            anderson::RunOptions options;
            options.seed = seed;
            options.workers = workers;
            if (out)
                options.out = *out;
            options.plot = plot;
            const auto manifest = anderson::run(std::move(config), *task, options);
            for (const auto& file : manifest.outputs)
                std::cout << file << '\n';
            return 0;
        }
    } catch (const anderson::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kRuntimeError;
}
