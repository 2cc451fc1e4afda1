#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "schwinger/config.hpp"
#include "schwinger/error.hpp"
#include "schwinger/format.hpp"
#include "schwinger/run.hpp"
#include "schwinger/selftest.hpp"

using namespace schwinger;

namespace {

struct CommonFlags {
    std::string config;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
    std::vector<std::string> set;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("-c,--config", f.config, "run configuration (JSON, comments allowed)");
    cmd->add_option("--seed", f.seed, "override the RNG seed");
    cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "output directory (default $SCHWINGER_OUT/<kind> or runs/<kind>)");
    cmd->add_option("--set", f.set, "override a config value, e.g. --set model.n_sites=10");
}

int execute(ExperimentKind kind, const CLI::App* cmd, const CommonFlags& f) {
    ConfigOverrides ov;
    if (cmd->count("--seed")) ov.seed = f.seed;
    if (cmd->count("--threads")) ov.threads = f.threads;
    if (cmd->count("--out")) ov.out = f.out;
    ov.assignments = f.set;
    try {
        const auto config = f.config.empty() ? parse_config(nlohmann::json::object(), ov, kind)
                                             : load_config(f.config, ov, kind);
        const auto summary = run(config);
        for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << "wrote " << summary.files.size() << " files + manifest.json to " << config.out << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    }
}

int selftest() {
    int failed = 0;
    for (const auto& r : run_selftest()) {
        std::printf("%s  %-55s %s (tol %s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    format_double(r.value).c_str(), format_double(r.tolerance).c_str());
        failed += !r.passed;
    }
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Encoded lattice Schwinger model simulator"};
    app.set_version_flag("--version", std::string(tool_version()) + " (" + build_describe() + ")");
    app.require_subcommand(1);

    const std::pair<ExperimentKind, const char*> kinds[] = {
        {ExperimentKind::evolve, "exact evolution of observables on a time grid"},
        {ExperimentKind::trotter, "gate-level digital evolution, ideal gates"},
        {ExperimentKind::noise, "trajectory-averaged digital evolution with quasi-static noise"},
        {ExperimentKind::entropy, "exact evolution of block entropies"},
        {ExperimentKind::continuum, "lattice-spacing and size sweep of the quench rate function"},
        {ExperimentKind::compare, "exact curve next to digital curves for several cycle times"},
    };
    CommonFlags flags;
    std::vector<std::pair<ExperimentKind, CLI::App*>> commands;
    for (const auto& [kind, help] : kinds) {
        auto* cmd = app.add_subcommand(to_string(kind), help);
        add_common(cmd, flags);
        commands.emplace_back(kind, cmd);
    }
    auto* self = app.add_subcommand("selftest", "identity and oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (self->parsed()) return selftest();
    for (const auto& [kind, cmd] : commands)
        if (cmd->parsed()) return execute(kind, cmd, flags);
    return 1;
}
