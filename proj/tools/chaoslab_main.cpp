#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chaoslab/config.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/experiment.hpp"
#include "chaoslab/version.hpp"

namespace {

// exit codes: 0 success, 1 usage, 2 domain/config, 3 divergence
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitDivergence = 3;

struct SubArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

int run(const std::string& name, const SubArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) {
        std::cerr << "chaoslab: cannot read config file '" << args.config_path << "'\n";
        return kExitUsage;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    std::optional<std::uint64_t> seed = args.seed;
    if (!seed) {
        if (const char* env = std::getenv("CHAOS_SEED")) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0') {
                std::cerr << "chaoslab: CHAOS_SEED='" << env << "' is not an unsigned integer\n";
                return kExitUsage;
            }
            seed = v;
        }
    }

    try {
        const chaoslab::ExperimentSpec spec = chaoslab::parse_config(buf.str());
        const chaoslab::RunManifest manifest =
            chaoslab::run_subcommand(name, spec, args.out_dir, seed);
        std::cout << "wrote " << manifest.outputs.size() << " output file(s) + manifest.json to "
                  << args.out_dir << " in " << manifest.duration_seconds << " s\n";
        for (const auto& [key, value] : manifest.metrics)
            std::cout << "  " << key << " = " << value << '\n';
        for (const auto& [key, value] : manifest.notes)
            std::cout << "  " << key << " = " << value << '\n';
        return 0;
    } catch (const chaoslab::DivergenceError& e) {
        std::cerr << "chaoslab " << name << ": divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const chaoslab::TrainingDivergenceError& e) {
        std::cerr << "chaoslab " << name << ": divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "chaoslab " << name << ": " << e.what() << '\n';
        return kExitDomain;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chaoslab: chaotic-system laboratory (Lorenz, logistic map, Chua circuit) with "
                 "an online-trained neural controller"};
    app.set_version_flag("--version", chaoslab::kVersion);
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> kSubcommands = {
        {"simulate", "integrate one system and write its trajectory"},
        {"bifurcate", "logistic-map bifurcation scan"},
        {"lyapunov", "largest Lyapunov exponent estimate"},
        {"sweep", "classify the free-running Chua plant over an R x C1 grid"},
        {"control", "run the ANN-controlled Chua closed loop"},
        {"plot", "re-render a CSV produced by another subcommand as SVG"},
    };

    std::map<std::string, SubArgs> args;
    for (const auto& [name, description] : kSubcommands) {
        CLI::App* sub = app.add_subcommand(name, description);
        SubArgs& a = args[name];
        sub->add_option("--config", a.config_path, "experiment config file")->required();
        sub->add_option("--out", a.out_dir, "output directory")->required();
        sub->add_option("--seed", a.seed, "seed override (also: CHAOS_SEED env var)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    for (const auto& [name, a] : args)
        if (app.get_subcommand(name)->parsed()) return run(name, a);
    return kExitUsage;
}
