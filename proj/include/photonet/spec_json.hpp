// spec_json.hpp — JSON (de)serialization of NetworkSpec
//
// Schema (all frequencies in rad/ns, temperatures in kelvin, times in ns):
//
//   {
//     "frequencies": [[10.0]],                  // N x N Hermitian; entries are numbers or [re, im]
//     "drives": [
//       {"kind": "Monochromatic", "target": 0, "amplitude": 10, "frequency": 9.5, "phase": 0},
//       {"kind": "Tabulated", "target": 0, "times": [...], "values": [[re, im], ...]}
//     ],
//     "waveguides": [
//       {"label": "CROW1", "temperature": 5.0, "coupling": [1.0],
//        "spectral": {"kind": "TightBindingSemicircle", "center": 9.5, "hopping": 0.3, "couplingRatio": 0.5}},
//       {"spectral": {"kind": "DiscreteModes", "modes": [{"coupling": [re, im], "frequency": 2.0}]}},
//       {"spectral": {"kind": "Tabulated", "frequencies": [...], "values": [...]}}
//     ],
//     "initialField": [0.0],                     // optional, default zero
//     "initialOccupation": [[0.0]],              // optional, default zero
//     "grid": {"t0": 0, "tEnd": 40, "nSteps": 8000, "outputEvery": 2}
//   }
//
// Unknown keys are rejected. "coupling" defaults to [1] for a single resonator.

#pragma once

#include <filesystem>

#include <json.hpp>

#include "photonet/model.hpp"

namespace photonet {

NetworkSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const NetworkSpec& spec);

// Parses a file, allowing // and /* */ comments.
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace photonet
