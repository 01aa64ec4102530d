#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include "hpn/flows.hpp"

namespace hpn {

struct GridSection {
    int N = 256;
    double L = 6.283185307179586;
    std::string mode = "periodic";  // periodic | line
};

struct FlowSection {
    std::string kind = "mkdv";  // mkdv | sg | hierarchy
    int l = 1;
    double dt = 0;  // 0: cfl * dx^order
    double t_end = 0;
    std::string sg_branch = "minus";  // minus | plus
    bool galilean_removed = false;
    double cfl = 0.05;
    bool dealias = true;
    int sg_substeps = 4;
};

// One Fourier term cos(k x 2pi/L) c + sin(k x 2pi/L) s added to a component:
// "u" for the scalar, "v1".."v{n-1}" for the vector slots.
struct Coefficient {
    std::string component = "u";
    int k = 0;
    std::array<double, 4> cos{};
    std::array<double, 4> sin{};
};

struct InitialSection {
    std::string preset = "random";
    std::uint64_t seed = 1;
    double amplitude = 0.5;   // random, vector_only
    int modes = 4;            // random, vector_only
    double a = 2.0;           // soliton and kink parameter
    std::optional<double> center;  // default L/2
    std::array<double, 4> direction{0, 1, 0, 0};
    bool localize = false;
    std::optional<double> width;  // default L/10
    std::vector<Coefficient> coefficients;
};

struct OutputSection {
    std::string directory = "out";
    int cadence = 1;
    std::vector<std::string> formats{"csv", "json"};  // csv | json | binary
    bool curve = false;
    std::optional<bool> wave_map;  // default: on for SG runs
    bool mkdv_map = false;
    double map_dt = 1e-4;
    int substeps = 8;  // Magnus substeps for reconstruction
};

struct RunConfig {
    int n = 1;
    GridSection grid;
    FlowSection flow;
    InitialSection initial;
    OutputSection output;

    bool has_format(const std::string& f) const;
};

// Parses and validates a JSON document; unknown keys, wrong types and out-of-range
// values raise ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

struct PresetInfo {
    std::string name;
    std::string provenance;
    std::string description;
};
const std::vector<PresetInfo>& preset_registry();

PeriodicGrid make_grid(const RunConfig& cfg);
StatePair initial_state(const RunConfig& cfg);
SimConfig sim_config(const RunConfig& cfg);
OpContext op_context(const RunConfig& cfg);

}  // namespace hpn
