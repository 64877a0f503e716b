#include "pita/config.hpp"
#include "pita/errors.hpp"
#include "pita/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::vector<std::string> overrides;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "Config file (key = value lines)");
    cmd->add_option("--preset", o.preset, "Built-in preset applied before the config file");
    cmd->add_option("--set", o.overrides, "Override one key: --set key=value (repeatable)");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores) [0]");
    cmd->add_option("--seed", o.seed, "Annealing seed [42]");
    cmd->add_option("--out", o.out, "Output directory [out]");
}

pita::ConfigSources sources_from(const CLI::App* cmd, const CommonOptions& o) {
    pita::ConfigSources s;
    if (cmd->count("--preset") > 0) {
        s.preset = o.preset;
    }
    if (cmd->count("--config") > 0) {
        s.config_path = o.config_path;
    }
    s.overrides = o.overrides;
    if (cmd->count("--threads") > 0) {
        s.threads = o.threads;
    }
    if (cmd->count("--seed") > 0) {
        s.seed = o.seed;
    }
    if (cmd->count("--out") > 0) {
        s.out_dir = o.out;
    }
    return s;
}

void print_rows(const pita::ExperimentConfig& cfg, const pita::ParerealRun& run) {
    std::cout << pita::render_report(cfg, run);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parareal with epsilon-algorithm extrapolation for linear time-invariant systems"};
    app.require_subcommand(1);
    app.footer(pita::config_reference());

    CommonOptions opts;
    auto* exact = app.add_subcommand("exact", "Exact solution at the coarse instants (exact.csv)");
    auto* euler = app.add_subcommand("euler-study", "Explicit Euler ladder and Omega error curves");
    auto* para = app.add_subcommand("parareal", "Parareal run, q calibration and extrapolation");
    auto* optq = app.add_subcommand("optimize-q", "Calibrate q only (calibration.csv)");
    for (auto* cmd : {exact, euler, para, optq}) {
        add_common(cmd, opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        const pita::ExperimentConfig cfg = pita::parse_config(sources_from(cmd, opts));
        if (cmd == exact) {
            pita::cmd_exact(cfg);
        } else if (cmd == euler) {
            pita::cmd_euler_study(cfg);
        } else if (cmd == para) {
            print_rows(cfg, pita::cmd_parareal(cfg));
        } else {
            const auto run = pita::cmd_optimize_q(cfg);
            for (const auto& c : run.calibrations) {
                std::cout << "slice " << c.slice << ": q_opt " << pita::format_real(c.result.q_opt)
                          << ", objective " << pita::format_real(c.result.objective_at_opt) << "\n";
            }
        }
        std::cerr << "wrote " << cfg.out_dir << "\n";
    } catch (const pita::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const pita::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const pita::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
