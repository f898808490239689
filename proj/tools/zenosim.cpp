// zenosim: quantum Zeno product formulas, their semiclassical symbol
// hierarchy, and phase-space diagnostics on periodic grids.
//
// Subcommands: zeno | hierarchy | wigner | verify | sweep.
// Exit codes: 0 ok, 1 unexpected error, 2 invalid config, 3 guard refusal,
// 4 numerical guard tripped mid-run (partial results flushed).

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeno/errors.hpp"
#include "zeno/experiment.hpp"
#include "zeno/verification.hpp"
#include "zeno/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::size_t jobs = 1;
    double budget = -1.0;
    bool stamp = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON experiment configuration")
        ->required();
    cmd->add_option("--set", args.overrides,
                    "dotted-path config override, e.g. schedule.J=3 (repeatable)");
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--jobs", args.jobs, "parallel independent runs")->check(CLI::PositiveNumber);
    cmd->add_option("--budget", args.budget, "sweep cost budget in work units");
    cmd->add_flag("--stamp", args.stamp,
                  "include timestamps and wall times (breaks byte reproducibility)");
}

zeno::RunOptions options_from(const CommonArgs& args) {
    zeno::RunOptions opt;
    opt.out_dir = args.out_dir;
    opt.jobs = args.jobs;
    opt.stamp = args.stamp;
    if (args.budget > 0.0) opt.budget = args.budget;
    return opt;
}

int run_verify(const zeno::ExperimentConfig& cfg) {
    const auto results = zeno::run_verification(cfg);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %-34s measured=%.3e threshold=%.3e%s%s\n",
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.threshold,
                    r.note.empty() ? "" : "  ", r.note.c_str());
        all = all && r.pass;
    }
    std::printf("%s: %zu checks\n", all ? "OK" : "FAILED", results.size());
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum Zeno product formulas and their semiclassical symbol hierarchy"};
    app.set_version_flag("--version", zeno::version_string);
    app.require_subcommand(1);

    CommonArgs args;
    const char* names[] = {"zeno", "hierarchy", "wigner", "verify", "sweep"};
    const char* descs[] = {
        "survival probabilities and distance to the confined (Dirichlet) evolution",
        "symbol-hierarchy sup norms, supports and vanishing verdicts",
        "Wigner phase-space field dumps of the measured state",
        "run the invariant suite, exit 0 iff every property holds",
        "cartesian escape sweep with cost estimation and budget refusal"};
    for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], descs[i]), args);

    CLI11_PARSE(app, argc, argv);

    try {
        const zeno::ExperimentConfig cfg = zeno::load_config(args.config_path, args.overrides);
        const zeno::RunOptions opt = options_from(args);
        std::vector<std::string> written;
        if (app.got_subcommand("zeno")) {
            written = zeno::run_zeno(cfg, opt);
        } else if (app.got_subcommand("hierarchy")) {
            written = zeno::run_hierarchy(cfg, opt);
        } else if (app.got_subcommand("wigner")) {
            written = zeno::run_wigner(cfg, opt);
        } else if (app.got_subcommand("sweep")) {
            written = zeno::run_sweep(cfg, opt);
        } else {
            return run_verify(cfg);
        }
        for (const auto& path : written) std::printf("wrote %s\n", path.c_str());
        return 0;
    } catch (const zeno::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const zeno::guard_error& e) {
        std::fprintf(stderr, "guard refusal: %s\n", e.what());
        return 3;
    } catch (const zeno::numeric_guard_error& e) {
        std::fprintf(stderr, "numerical guard: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
