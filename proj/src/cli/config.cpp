#include "hpn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hpn/errors.hpp"

namespace hpn {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

std::string path(const std::string& where, const std::string& key) { return where + "." + key; }

double get_number(const json& obj, const std::string& where, const std::string& key, double def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(path(where, key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(where, key) + " must be finite");
    return x;
}

std::int64_t get_int(const json& obj, const std::string& where, const std::string& key, std::int64_t def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(where, key) + " must be an integer");
    return v.get<std::int64_t>();
}

bool get_bool(const json& obj, const std::string& where, const std::string& key, bool def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(path(where, key) + " must be a boolean");
    return v.get<bool>();
}

std::string get_choice(const json& obj, const std::string& where, const std::string& key, const std::string& def,
                       const std::set<std::string>& choices) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(path(where, key) + " must be a string");
    const std::string s = v.get<std::string>();
    if (!choices.empty() && !choices.count(s)) {
        std::string list;
        for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
        throw ConfigError(path(where, key) + " = '" + s + "' is not one of: " + list);
    }
    return s;
}

std::array<double, 4> get_quat(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 4) throw ConfigError(where + " must be an array of 4 numbers");
    std::array<double, 4> q{};
    for (int c = 0; c < 4; ++c) {
        if (!v[c].is_number()) throw ConfigError(where + " must be an array of 4 numbers");
        q[c] = v[c].get<double>();
    }
    return q;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

const std::set<std::string> kPresets = {"random", "mkdv_soliton", "sg_kink", "sg_vector_kink",
                                        "vector_only", "zero", "coefficients"};

}  // namespace

bool RunConfig::has_format(const std::string& f) const {
    for (const auto& s : output.formats)
        if (s == f) return true;
    return false;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    reject_unknown(root, "config", {"algebra", "grid", "flow", "initial", "output"});
    RunConfig c;
    const json empty = json::object();
    auto section = [&](const char* name) -> const json& { return root.contains(name) ? root.at(name) : empty; };

    const json& alg = section("algebra");
    reject_unknown(alg, "algebra", {"n"});
    c.n = static_cast<int>(get_int(alg, "algebra", "n", c.n));
    require(c.n >= 1 && c.n <= 16, "algebra.n must be in 1..16");

    const json& grid = section("grid");
    reject_unknown(grid, "grid", {"N", "L", "mode"});
    c.grid.N = static_cast<int>(get_int(grid, "grid", "N", c.grid.N));
    c.grid.L = get_number(grid, "grid", "L", c.grid.L);
    c.grid.mode = get_choice(grid, "grid", "mode", c.grid.mode, {"periodic", "line"});
    require(c.grid.N >= 8 && c.grid.N % 2 == 0, "grid.N must be an even integer >= 8");
    require(c.grid.L > 0, "grid.L must be positive");

    const json& flow = section("flow");
    reject_unknown(flow, "flow", {"kind", "l", "dt", "t_end", "sg_branch", "galilean_removed", "cfl", "dealias",
                                  "sg_substeps"});
    c.flow.kind = get_choice(flow, "flow", "kind", c.flow.kind, {"mkdv", "sg", "hierarchy"});
    c.flow.l = static_cast<int>(get_int(flow, "flow", "l", c.flow.l));
    c.flow.dt = get_number(flow, "flow", "dt", c.flow.dt);
    c.flow.t_end = get_number(flow, "flow", "t_end", c.flow.t_end);
    c.flow.sg_branch = get_choice(flow, "flow", "sg_branch", c.flow.sg_branch, {"minus", "plus"});
    c.flow.galilean_removed = get_bool(flow, "flow", "galilean_removed", c.flow.galilean_removed);
    c.flow.cfl = get_number(flow, "flow", "cfl", c.flow.cfl);
    c.flow.dealias = get_bool(flow, "flow", "dealias", c.flow.dealias);
    c.flow.sg_substeps = static_cast<int>(get_int(flow, "flow", "sg_substeps", c.flow.sg_substeps));
    require(c.flow.l >= 0, "flow.l must be >= 0");
    require(c.flow.dt >= 0, "flow.dt must be >= 0");
    require(c.flow.t_end >= 0, "flow.t_end must be >= 0");
    require(c.flow.cfl > 0, "flow.cfl must be positive");
    require(c.flow.sg_substeps >= 1, "flow.sg_substeps must be >= 1");

    const json& ini = section("initial");
    reject_unknown(ini, "initial", {"preset", "seed", "amplitude", "modes", "a", "center", "direction", "localize",
                                    "width", "coefficients"});
    const bool has_coef = ini.contains("coefficients");
    c.initial.preset = get_choice(ini, "initial", "preset", has_coef ? "coefficients" : c.initial.preset, kPresets);
    require(has_coef == (c.initial.preset == "coefficients"),
            "initial.coefficients goes together with preset 'coefficients'");
    if (ini.contains("seed")) {
        const json& s = ini.at("seed");
        require(s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0),
                "initial.seed must be a non-negative integer");
        c.initial.seed = s.get<std::uint64_t>();
    }
    c.initial.amplitude = get_number(ini, "initial", "amplitude", c.initial.amplitude);
    c.initial.modes = static_cast<int>(get_int(ini, "initial", "modes", c.initial.modes));
    c.initial.a = get_number(ini, "initial", "a", c.initial.a);
    if (ini.contains("center")) c.initial.center = get_number(ini, "initial", "center", 0);
    if (ini.contains("direction")) c.initial.direction = get_quat(ini.at("direction"), "initial.direction");
    c.initial.localize = get_bool(ini, "initial", "localize", c.initial.localize);
    if (ini.contains("width")) c.initial.width = get_number(ini, "initial", "width", 0);
    require(c.initial.modes >= 1 && c.initial.modes < c.grid.N / 2, "initial.modes must be in 1..N/2-1");
    require(c.initial.a > 0, "initial.a must be positive");
    require(!c.initial.width || *c.initial.width > 0, "initial.width must be positive");
    if (has_coef) {
        const json& arr = ini.at("coefficients");
        require(arr.is_array(), "initial.coefficients must be an array");
        std::set<std::string> comps{"u"};
        for (int l = 1; l < c.n; ++l) comps.insert("v" + std::to_string(l));
        for (size_t m = 0; m < arr.size(); ++m) {
            const std::string w = "initial.coefficients[" + std::to_string(m) + "]";
            const json& e = arr[m];
            reject_unknown(e, w, {"component", "k", "cos", "sin"});
            Coefficient co;
            co.component = get_choice(e, w, "component", co.component, comps);
            co.k = static_cast<int>(get_int(e, w, "k", co.k));
            require(co.k >= 0 && co.k < c.grid.N / 2, w + ".k must be in 0..N/2-1");
            if (e.contains("cos")) co.cos = get_quat(e.at("cos"), w + ".cos");
            if (e.contains("sin")) co.sin = get_quat(e.at("sin"), w + ".sin");
            if (co.component == "u") require(co.cos[0] == 0 && co.sin[0] == 0, w + ": the scalar u is imaginary");
            c.initial.coefficients.push_back(co);
        }
    }
    const Quat d{c.initial.direction[0], c.initial.direction[1], c.initial.direction[2], c.initial.direction[3]};
    const bool scalar_preset = c.initial.preset == "mkdv_soliton" || c.initial.preset == "sg_kink";
    if (scalar_preset) require(d.re == 0 && norm2(d) > 0, "initial.direction must be a nonzero imaginary quaternion");
    if (c.initial.preset == "sg_vector_kink") require(norm2(d) > 0, "initial.direction must be nonzero");
    require(!(c.initial.preset == "sg_vector_kink" || c.initial.preset == "vector_only") || c.n >= 2,
            "preset '" + c.initial.preset + "' needs algebra.n >= 2");

    const json& out = section("output");
    reject_unknown(out, "output", {"directory", "cadence", "formats", "curve", "wave_map", "mkdv_map", "map_dt",
                                   "substeps"});
    c.output.directory = get_choice(out, "output", "directory", c.output.directory, {});
    c.output.cadence = static_cast<int>(get_int(out, "output", "cadence", c.output.cadence));
    require(c.output.cadence >= 1, "output.cadence must be >= 1");
    if (out.contains("formats")) {
        const json& f = out.at("formats");
        require(f.is_array(), "output.formats must be an array");
        c.output.formats.clear();
        for (const auto& s : f) {
            require(s.is_string(), "output.formats entries must be strings");
            const std::string v = s.get<std::string>();
            require(v == "csv" || v == "json" || v == "binary", "output.formats entry '" + v + "' is not csv, json or binary");
            c.output.formats.push_back(v);
        }
    }
    c.output.curve = get_bool(out, "output", "curve", c.output.curve);
    if (out.contains("wave_map")) c.output.wave_map = get_bool(out, "output", "wave_map", false);
    c.output.mkdv_map = get_bool(out, "output", "mkdv_map", c.output.mkdv_map);
    c.output.map_dt = get_number(out, "output", "map_dt", c.output.map_dt);
    c.output.substeps = static_cast<int>(get_int(out, "output", "substeps", c.output.substeps));
    require(c.output.map_dt > 0, "output.map_dt must be positive");
    require(c.output.substeps >= 1, "output.substeps must be >= 1");
    return c;
}

RunConfig load_config(const std::string& p) {
    std::ifstream is(p);
    if (!is) throw ConfigError("cannot read config file " + p);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
    ojson j;
    j["algebra"] = {{"n", c.n}};
    j["grid"] = ojson{{"N", c.grid.N}, {"L", c.grid.L}, {"mode", c.grid.mode}};
    j["flow"] = ojson{{"kind", c.flow.kind},
                      {"l", c.flow.l},
                      {"dt", c.flow.dt},
                      {"t_end", c.flow.t_end},
                      {"sg_branch", c.flow.sg_branch},
                      {"galilean_removed", c.flow.galilean_removed},
                      {"cfl", c.flow.cfl},
                      {"dealias", c.flow.dealias},
                      {"sg_substeps", c.flow.sg_substeps}};
    ojson ini{{"preset", c.initial.preset}, {"seed", c.initial.seed},   {"amplitude", c.initial.amplitude},
              {"modes", c.initial.modes},   {"a", c.initial.a},         {"direction", c.initial.direction},
              {"localize", c.initial.localize}};
    if (c.initial.center) ini["center"] = *c.initial.center;
    if (c.initial.width) ini["width"] = *c.initial.width;
    if (c.initial.preset == "coefficients") {
        ojson arr = ojson::array();
        for (const auto& co : c.initial.coefficients)
            arr.push_back(ojson{{"component", co.component}, {"k", co.k}, {"cos", co.cos}, {"sin", co.sin}});
        ini["coefficients"] = arr;
    }
    j["initial"] = ini;
    ojson out{{"directory", c.output.directory}, {"cadence", c.output.cadence}, {"formats", c.output.formats},
              {"curve", c.output.curve},         {"mkdv_map", c.output.mkdv_map}, {"map_dt", c.output.map_dt},
              {"substeps", c.output.substeps}};
    if (c.output.wave_map) out["wave_map"] = *c.output.wave_map;
    j["output"] = out;
    return j.dump(2);
}

const std::vector<PresetInfo>& preset_registry() {
    static const std::vector<PresetInfo> r = {
        {"random", "DERIVED: seeded band-limited generator",
         "modes 1..K with amplitude a/k and seeded normal coefficients; scalar part imaginary; optional Gaussian localization"},
        {"mkdv_soliton", "DERIVED: closed form substituted into the scalar mKdV equation",
         "u = a sech(a (x - x0)) q, vector part zero; travels left at speed a^2/4 with the Galilean term removed"},
        {"sg_kink", "DERIVED: sine-Gordon substitution u = psi_x / 2 q",
         "u = a sech(a (x - x0)) q with psi = 4 arctan(exp(a (x - x0) + 4t/a)), minus branch"},
        {"sg_vector_kink", "DERIVED: sine-Gordon substitution in the first vector slot",
         "bu_1 = 2a sech(a (x - x0)) q, u = 0; phi = 4 arctan(exp(a (x - x0) + t/a)) solves phi_xt = sin phi"},
        {"vector_only", "DERIVED: seeded band-limited generator with u = 0",
         "negative control: u = 0 and a generic vector part, so u_t != 0 at t = 0"},
        {"zero", "TRIVIAL", "all fields zero"},
        {"coefficients", "USER: inline Fourier coefficients", "sum of cos/sin terms per component"},
    };
    return r;
}

PeriodicGrid make_grid(const RunConfig& c) { return PeriodicGrid(c.grid.N, c.grid.L); }

StatePair initial_state(const RunConfig& c) {
    const PeriodicGrid g = make_grid(c);
    const auto& in = c.initial;
    const double x0 = in.center.value_or(g.L / 2);
    const double width = in.width.value_or(g.L / 10);
    const Quat dir{in.direction[0], in.direction[1], in.direction[2], in.direction[3]};
    const Quat q = dir / abs(dir);
    auto widen = [&](const StatePair& s1) {
        StatePair s = FieldPair::zeros(g, c.n);
        s.s = s1.s;
        for (int i = 0; i < g.N; ++i)
            for (int l = 0; l < std::min(s1.v.width(), s.v.width()); ++l) s.v(i, l) = s1.v(i, l);
        return s;
    };
    StatePair st;
    if (in.preset == "random" || in.preset == "vector_only") {
        std::mt19937_64 rng(in.seed);
        st = random_state(g, c.n, rng, in.modes, in.amplitude);
        if (in.preset == "vector_only") st.s = st.s.zeros_like();
    } else if (in.preset == "mkdv_soliton") {
        st = widen(mkdv_soliton(g, in.a, x0, 0.0, q));
    } else if (in.preset == "sg_kink") {
        st = widen(sg_kink(g, in.a, x0, 0.0, q));
    } else if (in.preset == "sg_vector_kink") {
        st = sg_vector_kink(g, c.n, in.a, x0, 0.0, q);
    } else if (in.preset == "zero") {
        st = FieldPair::zeros(g, c.n);
    } else if (in.preset == "coefficients") {
        st = FieldPair::zeros(g, c.n);
        for (const auto& co : in.coefficients) {
            const Quat cq{co.cos[0], co.cos[1], co.cos[2], co.cos[3]};
            const Quat sq{co.sin[0], co.sin[1], co.sin[2], co.sin[3]};
            const double kk = 2 * M_PI * co.k / g.L;
            for (int i = 0; i < g.N; ++i) {
                const Quat v = std::cos(kk * g.x(i)) * cq + std::sin(kk * g.x(i)) * sq;
                if (co.component == "u")
                    st.s(i) += v;
                else
                    st.v(i, std::stoi(co.component.substr(1)) - 1) += v;
            }
        }
    } else {
        throw ConfigError("unknown preset " + in.preset);
    }
    if (in.localize) st = localize(st, x0, width);
    return st;
}

SimConfig sim_config(const RunConfig& c) {
    SimConfig s;
    s.kind = c.flow.kind == "mkdv" ? FlowKind::Mkdv : c.flow.kind == "sg" ? FlowKind::Sg : FlowKind::Hierarchy;
    s.l = c.flow.l;
    s.dt = c.flow.dt;
    s.t_end = c.flow.t_end;
    s.galilean_removed = c.flow.galilean_removed;
    s.cfl = c.flow.cfl;
    s.dealias = c.flow.dealias;
    s.cadence = c.output.cadence;
    s.sg.branch = c.flow.sg_branch == "plus" ? SgBranch::Plus : SgBranch::Minus;
    s.sg.mode = c.grid.mode == "line" ? SgMode::Line : SgMode::Periodic;
    s.sg.substeps = c.flow.sg_substeps;
    s.sg.richardson = false;
    s.dinv = op_context(c).dinv;
    return s;
}

OpContext op_context(const RunConfig& c) {
    OpContext ctx;
    ctx.dinv.convention = c.grid.mode == "line" ? DinvConvention::Anchored : DinvConvention::ZeroMean;
    return ctx;
}

}  // namespace hpn
