// neqsteady.cpp — Command-line interface.
//
// Subcommands: steady, fig2, reduce, oracle-check. Exit codes: 0 success,
// 2 model/solver error, 3 configuration error, 4 oracle non-convergence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "neqsteady/run.hpp"

namespace {

using namespace neqsteady;

int default_jobs() {
    if (const char* env = std::getenv("NEQSTEADY_JOBS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw ConfigError("NEQSTEADY_JOBS must be a positive integer");
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output file '" + path + "'");
    }
    out << payload;
}

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string format;
    bool rwa = false;
    int jobs = 0;
};

RunConfig load_config(const CommonOptions& opts) {
    if (opts.config_path.empty()) {
        throw ConfigError("--config is required");
    }
    RunConfig cfg = parse_config_file(opts.config_path);
    if (opts.rwa) {
        cfg.rwa = true;
    }
    if (!opts.out_path.empty()) {
        cfg.output.path = opts.out_path;
    }
    if (!opts.format.empty()) {
        cfg.output.format = opts.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    }
    return cfg;
}

int run_steady(const CommonOptions& opts) {
    const RunConfig cfg = load_config(opts);
    const int jobs = opts.jobs > 0 ? opts.jobs : default_jobs();
    if (cfg.sweep) {
        const auto rows = run_sweep(cfg.model, cfg.rwa, *cfg.sweep, jobs);
        if (cfg.output.format == OutputFormat::Csv) {
            write_output(cfg.output.path, sweep_csv(cfg.sweep->parameter, rows));
        } else {
            write_output(cfg.output.path, sweep_json(cfg.sweep->parameter, rows).dump(2) + "\n");
        }
    } else {
        write_output(cfg.output.path, steady_json(cfg.model, cfg.rwa).dump(2) + "\n");
    }
    return 0;
}

int run_fig2(const std::string& panel, int points, double from, double to,
             const CommonOptions& opts) {
    if (panel.size() != 1) {
        throw ConfigError("--panel must be a, b or c");
    }
    const int jobs = opts.jobs > 0 ? opts.jobs : default_jobs();
    const auto rows = fig2_sweep(panel[0], points, from, to, jobs);
    write_output(opts.out_path, fig2_csv(rows));
    return 0;
}

int run_reduce(const CommonOptions& opts) {
    const RunConfig cfg = load_config(opts);
    const ReducedModel reduced = eliminate_bus(cfg.model);
    if (reduced.validity_ratio < 5.0) {
        std::cerr << "warning: bus detuning / coupling ratio " << reduced.validity_ratio
                  << " is below 5; the adiabatic elimination may be inaccurate\n";
    }
    write_output(cfg.output.path, reduce_json(cfg.model).dump(2) + "\n");
    return 0;
}

int run_oracle_check(const CommonOptions& opts) {
    const RunConfig cfg = load_config(opts);
    const OracleCheckResult result = oracle_check(cfg.model, cfg.rwa, cfg.oracle);
    write_output(cfg.output.path, oracle_check_json(result).dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Born-Markov steady states of coupled oscillators between heat baths"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string panel = "a";
    int points = 201;
    double from = -0.5;
    double to = 0.5;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) {
            cmd->add_option("--config", opts.config_path, "model configuration file")->required();
            cmd->add_flag("--rwa", opts.rwa, "drop inter-mode dissipator terms");
        }
        cmd->add_option("--out", opts.out_path, "output path (default stdout)");
        cmd->add_option("--jobs", opts.jobs, "worker threads (default NEQSTEADY_JOBS)");
    };

    CLI::App* steady = app.add_subcommand("steady", "steady-state report for one model");
    add_common(steady, true);
    steady->add_option("--format", opts.format, "csv or json (sweeps only)")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* fig2 = app.add_subcommand("fig2", "effective-temperature sweep CSV");
    add_common(fig2, false);
    fig2->add_option("--panel", panel, "a: equal couplings, b: g_R = 0.8 g_L, c: panel a with RWA")
        ->check(CLI::IsMember({"a", "b", "c"}));
    fig2->add_option("--points", points, "grid points (default 201)");
    fig2->add_option("--from", from, "sweep start (default -0.5)");
    fig2->add_option("--to", to, "sweep end (default 0.5)");

    CLI::App* reduce = app.add_subcommand("reduce", "bus elimination and closed-form report");
    add_common(reduce, true);

    CLI::App* oracle = app.add_subcommand("oracle-check", "Fock-space oracle cross-validation");
    add_common(oracle, true);

    try {
        app.parse(argc, argv);
        if (steady->parsed()) {
            return run_steady(opts);
        }
        if (fig2->parsed()) {
            return run_fig2(panel, points, from, to, opts);
        }
        if (reduce->parsed()) {
            return run_reduce(opts);
        }
        if (oracle->parsed()) {
            return run_oracle_check(opts);
        }
        return 3;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    } catch (const neqsteady::NotConvergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const neqsteady::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const neqsteady::InvalidSpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const neqsteady::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
