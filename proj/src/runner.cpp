#include "photonet/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "photonet/bornmarkov.hpp"
#include "photonet/coefficients.hpp"
#include "photonet/csv.hpp"
#include "photonet/dynamics.hpp"
#include "photonet/kernels.hpp"
#include "photonet/spec_json.hpp"

namespace photonet {

using nlohmann::json;

namespace {

void require_known(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        throw Error(where + ": expected an object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) {
            throw Error(where + ": unknown key '" + key + "'");
        }
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

const char* PLOT_SCRIPT = R"PY(#!/usr/bin/env python3
# Plots the traces listed in manifest.json: cavity field amplitude, v and n, and the
# per-waveguide photocurrents, one column of panels per sweep point.
import csv
import json
import os
import sys

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "manifest.json")) as fh:
    manifest = json.load(fh)

traces = [o for o in manifest["outputs"] if o["kind"] == "trace"]
if not traces:
    sys.exit("no traces in manifest")


def load(name):
    with open(os.path.join(here, name)) as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.startswith("#"))]
    header, body = rows[0], rows[1:]
    cols = {h: [] for h in header}
    for r in body:
        for h, v in zip(header, r):
            cols[h].append(v)
    return cols


def num(col):
    return [float(v) for v in col]


fig, axes = plt.subplots(3, len(traces), figsize=(3.2 * len(traces), 7.5), squeeze=False, sharex=True)
for c, entry in enumerate(traces):
    d = load(entry["file"])
    t = num(d["t"])
    amp = [(float(a) ** 2 + float(b) ** 2) ** 0.5 for a, b in zip(d["re_a_1"], d["im_a_1"])]
    axes[0][c].plot(t, amp)
    axes[0][c].set_title(", ".join(f"{k}={v}" for k, v in entry["point"].items()) + f" [{entry['method']}]",
                         fontsize=7)
    axes[1][c].plot(t, num(d["n_1"]), label="n")
    axes[1][c].plot(t, num(d["v_1"]), label="v")
    for name in d:
        if name.startswith("I_"):
            axes[2][c].plot(t, num(d[name]), label=name)
    axes[2][c].set_xlabel("t (ns)")
axes[0][0].set_ylabel("|<a(t)>|")
axes[1][0].set_ylabel("photon number")
axes[2][0].set_ylabel("photocurrent (1/ns)")
axes[1][0].legend(fontsize=7)
axes[2][0].legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(here, "traces.png"), dpi=150)
)PY";

std::string point_id(const std::vector<std::pair<std::string, double>>& values) {
    if (values.empty()) {
        return "base";
    }
    std::string id;
    for (const auto& [key, v] : values) {
        if (!id.empty()) {
            id += '_';
        }
        id += key + short_number(v);
    }
    return id;
}

struct Task {
    std::string method;
    const SweepPoint* point;
};

struct TaskOutput {
    std::vector<std::pair<std::filesystem::path, std::string>> files;  // name, kind
    std::vector<std::string> warnings;
    std::string failure;
};

std::string write_to_string(const auto& writer) {
    std::ostringstream out;
    writer(out);
    return out.str();
}

TaskOutput run_task(const RunConfig& config, const Task& task) {
    TaskOutput result;
    const auto& spec = task.point->spec;
    const std::string& id = task.point->id;
    const auto& dir = config.output_dir;
    std::string note;
    for (const auto& [key, v] : task.point->values) {
        note += ' ' + key + '=' + short_number(v);
    }
    const auto report = validate(spec);
    for (const auto& w : report.warnings) {
        result.warnings.push_back(id + ": " + w.location + ": " + w.message);
    }
    if (!report.ok()) {
        throw Error("validation failed:\n" + report.describe());
    }

    if (task.method == "bm") {
        for (const auto& w : born_markov_warnings(spec)) {
            result.warnings.push_back(id + ": " + w);
        }
        const auto trace = bm_trace(spec);
        const std::string name = "bm_" + id + ".csv";
        write_file_atomic(dir / name, write_to_string([&](std::ostream& o) { write_trace_csv(trace, "bm", note, o); }));
        result.files.emplace_back(name, "trace");
        return result;
    }

    const KernelSet kernels = build_kernel_set(spec);
    if (config.dumps.kernels) {
        const std::string name = "kernels_" + id + ".csv";
        write_file_atomic(dir / name, write_to_string([&](std::ostream& o) { write_kernel_csv(kernels, o); }));
        result.files.emplace_back(name, "kernels");
    }
    const PropagatorSet props = solve_propagators(spec, kernels);
    if (config.dumps.propagators) {
        const std::string name = "propagators_" + id + ".csv";
        write_file_atomic(dir / name, write_to_string([&](std::ostream& o) { write_propagator_csv(props, o); }));
        result.files.emplace_back(name, "propagators");
    }
    if (config.dumps.coefficients) {
        const auto coeffs = compute_coefficients(spec, props);
        const auto flagged = std::count(coeffs.singular.begin(), coeffs.singular.end(), true);
        if (flagged > 0) {
            result.warnings.push_back(id + ": u(t) numerically singular at " + std::to_string(flagged) +
                                      " output times; coefficients flagged there");
        }
        const std::string name = "coefficients_" + id + ".csv";
        write_file_atomic(dir / name, write_to_string([&](std::ostream& o) { write_coefficient_csv(coeffs, o); }));
        result.files.emplace_back(name, "coefficients");
    }
    const auto trace = compute_transport(spec, props);
    const std::string name = "exact_" + id + ".csv";
    write_file_atomic(dir / name, write_to_string([&](std::ostream& o) { write_trace_csv(trace, "exact", note, o); }));
    result.files.emplace_back(name, "trace");
    return result;
}

} // namespace

std::string short_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& sweep_keys() {
    static const std::vector<std::string> keys{"eta", "driveFrequency", "driveAmplitude", "temperature", "tEnd",
                                               "nSteps"};
    return keys;
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
    require_known(j, "config", {"spec", "specFile", "methods", "sweep", "outputDir", "emitPlots", "dumps"});
    RunConfig cfg;
    if (j.contains("spec") == j.contains("specFile")) {
        throw Error("config: exactly one of 'spec' and 'specFile' is required");
    }
    try {
        cfg.spec = j.contains("spec") ? spec_from_json(j["spec"])
                                      : spec_from_json(read_json_file(resolve(base_dir, j["specFile"].get<std::string>())));
    } catch (const json::exception& e) {
        throw Error(std::string("config: spec: ") + e.what());
    }
    if (j.contains("methods")) {
        cfg.methods = j["methods"].get<std::vector<std::string>>();
    }
    if (cfg.methods.empty()) {
        throw Error("config: 'methods' must not be empty");
    }
    for (const auto& m : cfg.methods) {
        if (m != "exact" && m != "bm") {
            throw Error("config: unknown method '" + m + "' (expected exact or bm)");
        }
    }
    if (j.contains("sweep")) {
        const auto& sj = j["sweep"];
        const auto& keys = sweep_keys();
        require_known(sj, "sweep", std::set<std::string>(keys.begin(), keys.end()));
        for (const auto& key : keys) {
            if (sj.contains(key)) {
                SweepAxis axis{key, sj[key].get<std::vector<double>>()};
                if (axis.values.empty()) {
                    throw Error("sweep." + key + ": empty value list");
                }
                cfg.sweep.push_back(std::move(axis));
            }
        }
    }
    cfg.output_dir = j.contains("outputDir") ? resolve(base_dir, j["outputDir"].get<std::string>())
                                             : base_dir / "photonet-out";
    cfg.emit_plots = j.value("emitPlots", false);
    if (j.contains("dumps")) {
        const auto& dj = j["dumps"];
        require_known(dj, "dumps", {"kernels", "propagators", "coefficients"});
        cfg.dumps.kernels = dj.value("kernels", false);
        cfg.dumps.propagators = dj.value("propagators", false);
        cfg.dumps.coefficients = dj.value("coefficients", false);
    }
    // Overrides must hit something in the spec.
    for (const auto& axis : cfg.sweep) {
        NetworkSpec probe = cfg.spec;
        apply_override(probe, axis.key, axis.values.front());
    }
    return cfg;
}

RunConfig read_run_config(const std::filesystem::path& path) {
    try {
        return run_config_from_json(read_json_file(path), path.parent_path().empty() ? "." : path.parent_path());
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void apply_override(NetworkSpec& spec, const std::string& key, double value) {
    bool hit = false;
    if (key == "eta") {
        for (auto& wg : spec.waveguides) {
            if (auto* sc = std::get_if<TightBindingSemicircle>(&wg.spectral)) {
                sc->coupling_ratio = value;
                hit = true;
            }
        }
    } else if (key == "driveFrequency" || key == "driveAmplitude") {
        for (auto& d : spec.drives) {
            if (auto* mono = std::get_if<Monochromatic>(&d.shape)) {
                (key == "driveFrequency" ? mono->frequency : mono->amplitude) = value;
                hit = true;
            }
        }
    } else if (key == "temperature") {
        for (auto& wg : spec.waveguides) {
            wg.temperature = value;
            hit = true;
        }
    } else if (key == "tEnd") {
        spec.grid.t_end = value;
        hit = true;
    } else if (key == "nSteps") {
        if (value < 1 || value != std::floor(value)) {
            throw Error("sweep.nSteps: expected a positive integer");
        }
        spec.grid.n_steps = static_cast<Index>(value);
        hit = true;
    } else {
        throw Error("unknown sweep key '" + key + "'");
    }
    if (!hit) {
        throw Error("sweep key '" + key + "' does not match any field of the spec");
    }
}

std::vector<SweepPoint> expand_sweep(const RunConfig& config) {
    std::vector<SweepPoint> points;
    std::vector<std::size_t> idx(config.sweep.size(), 0);
    while (true) {
        SweepPoint p;
        p.spec = config.spec;
        for (std::size_t a = 0; a < config.sweep.size(); ++a) {
            const double v = config.sweep[a].values[idx[a]];
            apply_override(p.spec, config.sweep[a].key, v);
            p.values.emplace_back(config.sweep[a].key, v);
        }
        p.id = point_id(p.values);
        points.push_back(std::move(p));
        // Odometer increment, last axis fastest.
        std::size_t a = config.sweep.size();
        while (a > 0) {
            --a;
            if (++idx[a] < config.sweep[a].values.size()) {
                break;
            }
            idx[a] = 0;
            if (a == 0) {
                return points;
            }
        }
        if (config.sweep.empty()) {
            return points;
        }
    }
}

NetworkSpec two_crow_spec(double eta, double drive_frequency, double temperature) {
    NetworkSpec spec;
    spec.frequencies = Eigen::MatrixXcd::Constant(1, 1, 10.0);
    spec.drives.push_back(DrivingSignal{Monochromatic{10.0, drive_frequency, 0.0}, 0});
    spec.waveguides.push_back(
        WaveguideSpec{"CROW1", TightBindingSemicircle{9.5, 0.3, eta}, Eigen::VectorXcd::Ones(1), temperature});
    spec.waveguides.push_back(
        WaveguideSpec{"CROW2", TightBindingSemicircle{10.5, 0.3, eta}, Eigen::VectorXcd::Ones(1), temperature});
    spec.initial_field = Eigen::VectorXcd::Zero(1);
    spec.initial_occupation = Eigen::MatrixXcd::Zero(1, 1);
    spec.grid = TimeGrid{0.0, 40.0, 8000, 2};
    return spec;
}

RunConfig two_crow_config() {
    RunConfig cfg;
    cfg.spec = two_crow_spec(0.5, 10.0, 0.005);
    cfg.sweep = {{"eta", {0.5, 1.0, 2.0}}, {"driveFrequency", {9.5, 10.0, 10.5}}, {"temperature", {0.005, 5.0}}};
    cfg.output_dir = "two-crow-out";
    return cfg;
}

void write_trace_csv(const TransportTrace& trace, const std::string& method, const std::string& header_note,
                     std::ostream& out) {
    const Index n = trace.field.empty() ? 0 : trace.field.front().size();
    const Index m = trace.currents.empty() ? 0 : trace.currents.front().size();
    out << "# photonet trace v1 method=" << method << header_note << '\n';
    out << "t,method";
    for (Index i = 1; i <= n; ++i) {
        out << ",re_a_" << i << ",im_a_" << i;
    }
    for (Index i = 1; i <= n; ++i) {
        out << ",n_" << i;
    }
    for (Index i = 1; i <= n; ++i) {
        out << ",v_" << i;
    }
    for (Index a = 1; a <= m; ++a) {
        out << ",I_" << a;
    }
    out << ",S,N,residual,edge\n";
    for (std::size_t r = 0; r < trace.size(); ++r) {
        out << format_double(trace.times[r]) << ',' << method;
        for (Index i = 0; i < n; ++i) {
            out << ',' << format_double(trace.field[r](i).real()) << ',' << format_double(trace.field[r](i).imag());
        }
        for (Index i = 0; i < n; ++i) {
            out << ',' << format_double(trace.photon_numbers[r](i));
        }
        for (Index i = 0; i < n; ++i) {
            out << ',' << format_double(trace.thermal_numbers[r](i));
        }
        for (Index a = 0; a < m; ++a) {
            out << ',' << format_double(trace.currents[r](a));
        }
        out << ',' << format_double(trace.source[r]) << ',' << format_double(trace.total_number[r]) << ','
            << format_double(trace.residual[r]) << ',' << (trace.edge[r] ? 1 : 0) << '\n';
    }
}

RunResult run(const RunConfig& config, unsigned jobs, std::ostream& log) {
    std::filesystem::create_directories(config.output_dir);
    const auto points = expand_sweep(config);
    std::vector<Task> tasks;
    for (const auto& p : points) {
        for (const auto& m : config.methods) {
            tasks.push_back({m, &p});
        }
    }
    std::vector<TaskOutput> outputs(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& task = tasks[i];
            try {
                outputs[i] = run_task(config, task);
            } catch (const std::exception& e) {
                outputs[i].failure = task.method + " " + task.point->id + ": " + e.what();
            }
            const std::lock_guard lock(log_mutex);
            log << (outputs[i].failure.empty() ? "done   " : "FAILED ") << task.method << ' ' << task.point->id
                << '\n';
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }

    RunResult result;
    json manifest;
    manifest["format"] = "photonet manifest v1";
    manifest["methods"] = config.methods;
    manifest["spec"] = spec_to_json(config.spec);
    json sweep = json::object();
    for (const auto& axis : config.sweep) {
        sweep[axis.key] = axis.values;
    }
    manifest["sweep"] = sweep;
    json entries = json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& out = outputs[i];
        result.warnings.insert(result.warnings.end(), out.warnings.begin(), out.warnings.end());
        if (!out.failure.empty()) {
            result.failures.push_back(out.failure);
            continue;
        }
        json point = json::object();
        for (const auto& [key, v] : tasks[i].point->values) {
            point[key] = v;
        }
        for (const auto& [name, kind] : out.files) {
            entries.push_back({{"file", name.string()}, {"kind", kind}, {"method", tasks[i].method},
                               {"point", point}});
            result.files.push_back(name);
        }
    }
    if (config.emit_plots) {
        write_file_atomic(config.output_dir / "plot_traces.py", PLOT_SCRIPT);
        entries.push_back({{"file", "plot_traces.py"}, {"kind", "plot"}});
        result.files.emplace_back("plot_traces.py");
    }
    manifest["outputs"] = entries;
    manifest["failures"] = result.failures;
    for (const auto& w : result.warnings) {
        log << "warning: " << w << '\n';
    }
    write_file_atomic(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
    result.files.emplace_back("manifest.json");
    return result;
}

} // namespace photonet
