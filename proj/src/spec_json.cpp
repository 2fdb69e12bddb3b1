#include "photonet/spec_json.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

namespace photonet {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw Error(where + ": expected an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!ok.count(item.key())) {
            throw Error(where + ": unknown key '" + item.key() + "'");
        }
    }
}

const json& need(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw Error(where + ": missing key '" + key + "'");
    }
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) {
        throw Error(where + ": expected a number");
    }
    return j.get<double>();
}

cplx complex_value(const json& j, const std::string& where) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw Error(where + ": expected a number or [re, im]");
}

json complex_json(cplx z) {
    if (z.imag() == 0.0) {
        return z.real();
    }
    return json::array({z.real(), z.imag()});
}

Eigen::VectorXcd complex_vector(const json& j, const std::string& where) {
    if (!j.is_array()) {
        throw Error(where + ": expected an array");
    }
    Eigen::VectorXcd v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Index>(i)) = complex_value(j[i], where + "[" + std::to_string(i) + "]");
    }
    return v;
}

Eigen::MatrixXcd complex_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw Error(where + ": expected a non-empty array of rows");
    }
    const auto rows = j.size();
    const auto cols = j[0].size();
    Eigen::MatrixXcd m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw Error(where + ": ragged matrix");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Index>(r), static_cast<Index>(c)) =
                complex_value(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return m;
}

std::vector<double> real_vector(const json& j, const std::string& where) {
    if (!j.is_array()) {
        throw Error(where + ": expected an array");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

json vector_json(const Eigen::VectorXcd& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        arr.push_back(complex_json(v(i)));
    }
    return arr;
}

json matrix_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(complex_json(m(r, c)));
        }
        rows.push_back(row);
    }
    return rows;
}

SpectralDensity density_from_json(const json& j, const std::string& where) {
    const std::string kind = need(j, "kind", where).get<std::string>();
    if (kind == "TightBindingSemicircle") {
        require_keys(j, where, {"kind", "center", "hopping", "couplingRatio"});
        return TightBindingSemicircle{number(need(j, "center", where), where + ".center"),
                                      number(need(j, "hopping", where), where + ".hopping"),
                                      number(need(j, "couplingRatio", where), where + ".couplingRatio")};
    }
    if (kind == "DiscreteModes") {
        require_keys(j, where, {"kind", "modes"});
        DiscreteModes dm;
        const auto& modes = need(j, "modes", where);
        for (std::size_t k = 0; k < modes.size(); ++k) {
            const std::string w = where + ".modes[" + std::to_string(k) + "]";
            require_keys(modes[k], w, {"coupling", "frequency"});
            dm.modes.push_back({complex_value(need(modes[k], "coupling", w), w + ".coupling"),
                                number(need(modes[k], "frequency", w), w + ".frequency")});
        }
        return dm;
    }
    if (kind == "Tabulated") {
        require_keys(j, where, {"kind", "frequencies", "values"});
        return TabulatedDensity{real_vector(need(j, "frequencies", where), where + ".frequencies"),
                                real_vector(need(j, "values", where), where + ".values")};
    }
    throw Error(where + ": unknown spectral kind '" + kind + "'");
}

json density_json(const SpectralDensity& s) {
    if (const auto* sc = std::get_if<TightBindingSemicircle>(&s)) {
        return {{"kind", "TightBindingSemicircle"},
                {"center", sc->center},
                {"hopping", sc->hopping},
                {"couplingRatio", sc->coupling_ratio}};
    }
    if (const auto* dm = std::get_if<DiscreteModes>(&s)) {
        json modes = json::array();
        for (const auto& m : dm->modes) {
            modes.push_back({{"coupling", complex_json(m.coupling)}, {"frequency", m.frequency}});
        }
        return {{"kind", "DiscreteModes"}, {"modes", modes}};
    }
    const auto& tab = std::get<TabulatedDensity>(s);
    return {{"kind", "Tabulated"}, {"frequencies", tab.frequencies}, {"values", tab.values}};
}

} // namespace

NetworkSpec spec_from_json(const json& j) {
    require_keys(j, "spec", {"frequencies", "drives", "waveguides", "initialField", "initialOccupation", "grid"});
    NetworkSpec spec;
    spec.frequencies = complex_matrix(need(j, "frequencies", "spec"), "frequencies");
    const Index n = spec.frequencies.rows();

    if (auto it = j.find("drives"); it != j.end()) {
        for (std::size_t d = 0; d < it->size(); ++d) {
            const auto& dj = (*it)[d];
            const std::string where = "drives[" + std::to_string(d) + "]";
            const std::string kind = need(dj, "kind", where).get<std::string>();
            DrivingSignal drive;
            drive.target = dj.contains("target") ? need(dj, "target", where).get<Index>() : 0;
            if (kind == "Monochromatic") {
                require_keys(dj, where, {"kind", "target", "amplitude", "frequency", "phase"});
                drive.shape = Monochromatic{number(need(dj, "amplitude", where), where + ".amplitude"),
                                            number(need(dj, "frequency", where), where + ".frequency"),
                                            dj.contains("phase") ? number(dj["phase"], where + ".phase") : 0.0};
            } else if (kind == "Tabulated") {
                require_keys(dj, where, {"kind", "target", "times", "values"});
                TabulatedDrive tab;
                tab.times = real_vector(need(dj, "times", where), where + ".times");
                const auto vals = complex_vector(need(dj, "values", where), where + ".values");
                tab.values.assign(vals.data(), vals.data() + vals.size());
                drive.shape = std::move(tab);
            } else {
                throw Error(where + ": unknown drive kind '" + kind + "'");
            }
            spec.drives.push_back(std::move(drive));
        }
    }

    if (auto it = j.find("waveguides"); it != j.end()) {
        for (std::size_t a = 0; a < it->size(); ++a) {
            const auto& wj = (*it)[a];
            const std::string where = "waveguides[" + std::to_string(a) + "]";
            require_keys(wj, where, {"label", "spectral", "coupling", "temperature"});
            WaveguideSpec wg;
            wg.label = wj.contains("label") ? wj["label"].get<std::string>() : "channel" + std::to_string(a + 1);
            wg.spectral = density_from_json(need(wj, "spectral", where), where + ".spectral");
            if (wj.contains("coupling")) {
                wg.coupling = complex_vector(wj["coupling"], where + ".coupling");
            } else if (n == 1) {
                wg.coupling = Eigen::VectorXcd::Ones(1);
            } else {
                throw Error(where + ": 'coupling' is required when there is more than one resonator");
            }
            wg.temperature = wj.contains("temperature") ? number(wj["temperature"], where + ".temperature") : 0.0;
            spec.waveguides.push_back(std::move(wg));
        }
    }

    spec.initial_field = j.contains("initialField") ? complex_vector(j["initialField"], "initialField")
                                                    : Eigen::VectorXcd::Zero(n);
    spec.initial_occupation = j.contains("initialOccupation")
                                  ? complex_matrix(j["initialOccupation"], "initialOccupation")
                                  : Eigen::MatrixXcd::Zero(n, n);

    const auto& gj = need(j, "grid", "spec");
    require_keys(gj, "grid", {"t0", "tEnd", "nSteps", "outputEvery"});
    spec.grid.t0 = gj.contains("t0") ? number(gj["t0"], "grid.t0") : 0.0;
    spec.grid.t_end = number(need(gj, "tEnd", "grid"), "grid.tEnd");
    spec.grid.n_steps = need(gj, "nSteps", "grid").get<Index>();
    spec.grid.output_every = gj.contains("outputEvery") ? gj["outputEvery"].get<Index>() : 1;
    return spec;
}

json spec_to_json(const NetworkSpec& spec) {
    json drives = json::array();
    for (const auto& d : spec.drives) {
        if (const auto* mono = std::get_if<Monochromatic>(&d.shape)) {
            drives.push_back({{"kind", "Monochromatic"},
                              {"target", d.target},
                              {"amplitude", mono->amplitude},
                              {"frequency", mono->frequency},
                              {"phase", mono->phase}});
        } else {
            const auto& tab = std::get<TabulatedDrive>(d.shape);
            json values = json::array();
            for (const auto& v : tab.values) {
                values.push_back(json::array({v.real(), v.imag()}));
            }
            drives.push_back({{"kind", "Tabulated"}, {"target", d.target}, {"times", tab.times}, {"values", values}});
        }
    }
    json waveguides = json::array();
    for (const auto& wg : spec.waveguides) {
        waveguides.push_back({{"label", wg.label},
                              {"temperature", wg.temperature},
                              {"coupling", vector_json(wg.coupling)},
                              {"spectral", density_json(wg.spectral)}});
    }
    return {{"frequencies", matrix_json(spec.frequencies)},
            {"drives", drives},
            {"waveguides", waveguides},
            {"initialField", vector_json(spec.initial_field)},
            {"initialOccupation", matrix_json(spec.initial_occupation)},
            {"grid",
             {{"t0", spec.grid.t0},
              {"tEnd", spec.grid.t_end},
              {"nSteps", spec.grid.n_steps},
              {"outputEvery", spec.grid.output_every}}}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

} // namespace photonet
