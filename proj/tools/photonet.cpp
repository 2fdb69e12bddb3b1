// photonet.cpp — command-line front end: run configs, compare traces, built-in scenarios

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "photonet/csv.hpp"
#include "photonet/runner.hpp"

namespace {

int report(const photonet::RunResult& result, const std::filesystem::path& dir) {
    std::cout << "wrote " << result.files.size() << " files to " << dir.string() << '\n';
    if (!result.ok()) {
        for (const auto& f : result.failures) {
            std::cerr << "error: " << f << '\n';
        }
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"photonet: exact non-Markovian dynamics and photon transport of driven resonators"};
    app.require_subcommand(1);

    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string out_dir;

    auto* run_cmd = app.add_subcommand("run", "Execute a JSON run configuration");
    std::string config_path;
    run_cmd->add_option("config", config_path, "Run configuration (JSON, comments allowed)")->required();
    run_cmd->add_option("--jobs,-j", jobs, "Sweep points solved in parallel")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out,-o", out_dir, "Output directory (overrides outputDir)");

    auto* cmp_cmd = app.add_subcommand("compare", "Per-column relative deviations of trace B against trace A");
    std::string trace_a;
    std::string trace_b;
    std::optional<double> tol;
    std::string json_out;
    cmp_cmd->add_option("a", trace_a, "Reference trace")->required();
    cmp_cmd->add_option("b", trace_b, "Trace to compare")->required();
    cmp_cmd->add_option("--tol", tol, "Flag columns whose deviation exceeds this and exit 1");
    cmp_cmd->add_option("--json", json_out, "Also write the report as JSON to this file");

    auto* scn_cmd = app.add_subcommand("scenario", "Run a built-in scenario");
    std::string scenario;
    std::vector<double> etas;
    std::vector<double> drives;
    std::vector<double> temps;
    std::vector<std::string> methods;
    std::optional<double> t_end;
    std::optional<long> n_steps;
    std::optional<long> output_every;
    bool plots = false;
    scn_cmd->add_option("name", scenario, "Scenario name")->required()->check(CLI::IsMember({"two-crow"}));
    scn_cmd->add_option("--eta", etas, "Coupling ratios to sweep")->delimiter(',');
    scn_cmd->add_option("--drive-frequency", drives, "Drive frequencies (rad/ns) to sweep")->delimiter(',');
    scn_cmd->add_option("--temperature", temps, "Waveguide temperatures (K) to sweep")->delimiter(',');
    scn_cmd->add_option("--methods", methods, "exact, bm or both")->delimiter(',')
        ->check(CLI::IsMember({"exact", "bm"}));
    scn_cmd->add_option("--t-end", t_end, "End of the time window (ns)");
    scn_cmd->add_option("--n-steps", n_steps, "Number of time steps")->check(CLI::PositiveNumber);
    scn_cmd->add_option("--output-every", output_every, "Report every k-th step")->check(CLI::PositiveNumber);
    scn_cmd->add_option("--jobs,-j", jobs, "Sweep points solved in parallel")->check(CLI::PositiveNumber);
    scn_cmd->add_option("--out,-o", out_dir, "Output directory");
    scn_cmd->add_flag("--emit-plots", plots, "Also write a matplotlib script");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            auto config = photonet::read_run_config(config_path);
            if (!out_dir.empty()) {
                config.output_dir = out_dir;
            }
            return report(photonet::run(config, jobs, std::cerr), config.output_dir);
        }
        if (cmp_cmd->parsed()) {
            const auto rep =
                photonet::compare_tables(photonet::read_csv(trace_a), photonet::read_csv(trace_b), tol);
            std::cout << rep.to_text();
            if (!json_out.empty()) {
                photonet::write_file_atomic(json_out, rep.to_json());
            }
            if (!rep.ok()) {
                std::cerr << "deviation exceeds tolerance " << photonet::format_double(*tol) << '\n';
                return 1;
            }
            return 0;
        }
        auto config = photonet::two_crow_config();
        for (auto& axis : config.sweep) {
            if (axis.key == "eta" && !etas.empty()) {
                axis.values = etas;
            } else if (axis.key == "driveFrequency" && !drives.empty()) {
                axis.values = drives;
            } else if (axis.key == "temperature" && !temps.empty()) {
                axis.values = temps;
            }
        }
        if (!methods.empty()) {
            config.methods = methods;
        }
        if (t_end) {
            config.spec.grid.t_end = *t_end;
        }
        if (n_steps) {
            config.spec.grid.n_steps = *n_steps;
        }
        if (output_every) {
            config.spec.grid.output_every = *output_every;
        }
        config.emit_plots = plots;
        if (!out_dir.empty()) {
            config.output_dir = out_dir;
        }
        return report(photonet::run(config, jobs, std::cerr), config.output_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
