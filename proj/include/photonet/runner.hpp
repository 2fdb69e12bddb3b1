// runner.hpp — Run configurations, parameter sweeps, the built-in two-CROW scenario and trace output

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "photonet/model.hpp"
#include "photonet/transport.hpp"

namespace photonet {

// Keys a sweep may override, in the order they are expanded.
//   eta             coupling ratio of every semicircle waveguide
//   driveFrequency  frequency of every monochromatic drive
//   driveAmplitude  amplitude of every monochromatic drive
//   temperature     temperature of every waveguide
//   tEnd, nSteps    time grid
const std::vector<std::string>& sweep_keys();

struct SweepAxis {
    std::string key;
    std::vector<double> values;
};

struct DumpOptions {
    bool kernels{false};
    bool propagators{false};
    bool coefficients{false};
};

struct RunConfig {
    NetworkSpec spec;
    std::vector<std::string> methods{"exact"};
    std::vector<SweepAxis> sweep;
    std::filesystem::path output_dir{"photonet-out"};
    bool emit_plots{false};
    DumpOptions dumps;
};

// Relative "specFile" and "outputDir" entries resolve against base_dir.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
RunConfig read_run_config(const std::filesystem::path& path);

struct SweepPoint {
    std::string id;                                    // e.g. "eta0.5_driveFrequency9.5"
    std::vector<std::pair<std::string, double>> values;
    NetworkSpec spec;
};

void apply_override(NetworkSpec& spec, const std::string& key, double value);
std::vector<SweepPoint> expand_sweep(const RunConfig& config);

// The two-waveguide cavity: w_c = 10, bands centred at 9.5 and 10.5 with hopping 0.3,
// drive amplitude 10, t in [0, 40] with 8000 steps, every second step reported.
NetworkSpec two_crow_spec(double eta, double drive_frequency, double temperature);

// Default sweep: eta {0.5, 1, 2} x drive {9.5, 10, 10.5} x T {0.005, 5} K.
RunConfig two_crow_config();

// Trace CSV: t,method,re_a_i,im_a_i...,n_i...,v_i...,I_a...,S,N,residual,edge.
void write_trace_csv(const TransportTrace& trace, const std::string& method, const std::string& header_note,
                     std::ostream& out);

struct RunResult {
    std::vector<std::filesystem::path> files;  // relative to the output directory
    std::vector<std::string> warnings;
    std::vector<std::string> failures;         // one entry per failed (method, point)

    bool ok() const { return failures.empty(); }
};

// Runs every (method, sweep point) on up to `jobs` threads, writes files atomically and
// the manifest last. Progress and warnings go to `log`.
RunResult run(const RunConfig& config, unsigned jobs, std::ostream& log);

// Shortest decimal text that round-trips, used in file names and headers.
std::string short_number(double value);

} // namespace photonet
