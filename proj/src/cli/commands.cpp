#include "hpn/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "hpn/checks.hpp"
#include "hpn/config.hpp"
#include "hpn/errors.hpp"
#include "hpn/geometry.hpp"

namespace hpn {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

RunConfig resolve_config(const CommandOptions& o) {
    RunConfig c;
    if (o.config_path)
        c = load_config(*o.config_path);
    else if (o.config_text)
        c = parse_config(*o.config_text);
    if (o.seed) c.initial.seed = *o.seed;
    if (o.out) c.output.directory = *o.out;
    return c;
}

fs::path prepare_dir(const std::string& d) {
    fs::path p(d);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + d + ": " + ec.message());
    return p;
}

std::ofstream open_out(const fs::path& p, bool binary = false) {
    std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

std::string num(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.17e", x);
    return b;
}

// Scalar in slot 0 followed by the vector slots.
Field pack_state(const StatePair& s) {
    const int n = s.n();
    Field f(s.grid(), FieldKind::Vector, n);
    for (int i = 0; i < s.s.size(); ++i) {
        f(i, 0) = s.s(i);
        for (int l = 0; l < n - 1; ++l) f(i, l + 1) = s.v(i, l);
    }
    return f;
}

std::string step_name(const char* stem, long step, const char* ext) {
    char b[64];
    std::snprintf(b, sizeof b, "%s_%08ld.%s", stem, step, ext);
    return b;
}

FrameState reconstruct_frame(const StatePair& st, int substeps) {
    TransportOptions to;
    to.substeps = substeps;
    to.keep_fine = true;
    return transport_frame(st, to);
}

template <class F>
int guarded(std::ostream& err, const char* verb, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "hpn " << verb << ": configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const BlowUpError& e) {
        err << "hpn " << verb << ": blow-up at t = " << num(e.time) << ": " << e.what() << '\n';
        return kExitFailure;
    } catch (const NonlocalityError& e) {
        err << "hpn " << verb << ": " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "hpn " << verb << ": " << e.what() << '\n';
        return kExitFailure;
    }
}

ojson wave_map_report(const RunConfig& cfg, const SimConfig& sim, const StatePair& last, double t_last, double dt) {
    const double d = std::min(dt > 0 ? dt : 1e-3, 1e-3);
    std::vector<StatePair> states{last};
    for (int k = 1; k < 5; ++k) states.push_back(sg_step(states.back(), d, sim.sg, t_last + (k - 1) * d));
    const SgSolution s = sg_solve_h(states[2], sim.sg);
    const WaveReport wr = verify_wave_map(states, t_last + 2 * d, d, sg_frame_flow(s), s.c, cfg.output.substeps);
    return ojson{{"t_mid", t_last + 2 * d}, {"dt", d},
                 {"omega_t", wr.omega_t},   {"e_t", wr.e_t},
                 {"nabla_gamma_t", wr.nabla_gamma_t}, {"speed_spread", wr.speed_spread},
                 {"residual", wr.residual}, {"points", wr.points},
                 {"tolerance", 1e-5},       {"pass", wr.residual <= 1e-5}};
}

ojson mkdv_map_report(const RunConfig& cfg, const StatePair& last) {
    SimConfig geo;
    geo.dealias = false;  // geometric flow: Galilean term kept
    const RhsFn rhs = make_rhs(geo);
    const double d = cfg.output.map_dt, dx = last.grid().dx();
    const int ns = static_cast<int>(std::ceil(d / (0.05 * dx * dx * dx)));
    const double h = d / ns;
    std::vector<StatePair> s(5);
    s[2] = last;
    for (int k = 1; k <= 2; ++k) {
        StatePair p = s[1 + k], m = s[3 - k];
        for (int q = 0; q < ns; ++q) {
            p = step_rk4(p, rhs, h);
            m = step_rk4(m, rhs, -h);
        }
        s[2 + k] = p;
        s[2 - k] = m;
    }
    const MapReport mr = verify_mkdv_map(s, d, cfg.output.substeps);
    return ojson{{"dt", d},
                 {"residual", mr.residual},
                 {"residual_perp_scalar", mr.residual_perp_scalar},
                 {"residual_perp_vector", mr.residual_perp_vector},
                 {"residual_tangential", mr.residual_tangential},
                 {"residual_opposite_tangential_sign", mr.residual_opposite_sign},
                 {"residual_gamma_t_h_form", mr.residual_gamma_t_h},
                 {"scale", mr.scale},
                 {"points", mr.points},
                 {"tolerance", 1e-4},
                 {"pass", mr.residual <= 1e-4}};
}

void write_json_file(const fs::path& p, const ojson& j) { open_out(p) << j.dump(2) << '\n'; }

}  // namespace

int cmd_verify(const CommandOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, "verify", [&] {
        const checks::Scope scope = checks::scope_from_string(o.scope);
        if (o.config_path || o.config_text) resolve_config(o);  // validate only
        if (o.lmax < 0) throw ConfigError("--lmax must be >= 0");
        checks::CheckOptions co;
        if (o.seed) co.seed = *o.seed;
        co.lmax = o.lmax;
        const checks::Report r = checks::run(scope, co);
        checks::write_text(out, r);
        for (const auto& s : checks::summarize(r)) {
            char b[160];
            std::snprintf(b, sizeof b, "criterion %d: %s (%d checks, %d failed, tightest %s)\n", s.criterion,
                          s.pass ? "PASS" : "FAIL", s.checks, s.failed, s.worst.c_str());
            out << b;
        }
        if (o.out) {
            const fs::path d = prepare_dir(*o.out);
            auto os = open_out(d / "verify_report.json");
            checks::write_json(os, r, scope, co);
        }
        return checks::all_passed(r) ? kExitOk : kExitFailure;
    });
}

int cmd_simulate(const CommandOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, "simulate", [&] {
        const RunConfig cfg = resolve_config(o);
        const SimConfig sim = sim_config(cfg);
        const StatePair init = initial_state(cfg);
        int steps = 0;
        const double dt = resolve_dt(sim, init.grid(), &steps);
        const fs::path dir = prepare_dir(cfg.output.directory);
        open_out(dir / "config.json") << config_to_json(cfg) << '\n';
        const bool csv = cfg.has_format("csv"), bin = cfg.has_format("binary"), js = cfg.has_format("json");
        if (csv || bin) prepare_dir((dir / "snapshots").string());
        if (cfg.output.curve) prepare_dir((dir / "curves").string());

        auto observer = [&](const Snapshot& sn) {
            const long step = dt > 0 ? std::lround(sn.t / dt) : 0;
            const Field f = pack_state(sn.state);
            if (csv) {
                auto os = open_out(dir / "snapshots" / step_name("state", step, "csv"));
                write_field_csv(os, f);
            }
            if (bin) {
                auto os = open_out(dir / "snapshots" / step_name("state", step, "bin"), true);
                write_field_binary(os, f, cfg.n);
            }
            if (cfg.output.curve) {
                const FrameState fr = reconstruct_frame(sn.state, cfg.output.substeps);
                auto os = open_out(dir / "curves" / step_name("curve", step, "csv"));
                write_curve_csv(os, reconstruct_curve(fr), sn.state.grid());
            }
        };
        const Trajectory tr = simulate(sim, init, observer);
        const ConservationReport rep = conserved_report(tr);
        if (csv) {
            auto os = open_out(dir / "conservation.csv");
            rep.to_csv(os);
        }
        if (js) {
            auto os = open_out(dir / "conservation.json");
            rep.to_json(os);
        }

        const Snapshot& last = tr.snaps.back();
        ojson summary{{"verb", "simulate"},
                      {"flow", cfg.flow.kind},
                      {"n", cfg.n},
                      {"N", cfg.grid.N},
                      {"dt", dt},
                      {"steps", steps},
                      {"snapshots", tr.snaps.size()},
                      {"t_final", last.t},
                      {"drift_H0", rep.drift_H0},
                      {"drift_H1", rep.drift_H1}};
        if (sim.kind == FlowKind::Sg) summary["sg_constraint_dev_max"] = rep.sg_dev_max;

        if (sim.kind == FlowKind::Sg && cfg.output.wave_map.value_or(true)) {
            ojson wm;
            try {
                wm = wave_map_report(cfg, sim, last.state, last.t, dt);
            } catch (const AlignmentError& e) {
                wm = ojson{{"skipped", e.what()}};
            }
            write_json_file(dir / "wave_map.json", wm);
            if (wm.contains("residual")) summary["wave_map_residual"] = wm["residual"];
        }
        if (cfg.output.mkdv_map) {
            ojson mm;
            try {
                mm = mkdv_map_report(cfg, last.state);
            } catch (const AlignmentError& e) {
                mm = ojson{{"skipped", e.what()}};
            }
            write_json_file(dir / "mkdv_map.json", mm);
            if (mm.contains("residual")) summary["mkdv_map_residual"] = mm["residual"];
        }
        if (cfg.output.curve) {
            auto os = open_out(dir / "chordal_final.csv");
            write_chordal_csv(os, reconstruct_curve(reconstruct_frame(last.state, cfg.output.substeps)));
        }
        write_json_file(dir / "summary.json", summary);
        out << summary.dump(2) << '\n';
        return kExitOk;
    });
}

int cmd_hierarchy(const CommandOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, "hierarchy", [&] {
        if (o.lmax < 0) throw ConfigError("--lmax must be >= 0");
        const RunConfig cfg = resolve_config(o);
        const StatePair st = initial_state(cfg);
        Hierarchy H(st, op_context(cfg));
        const int n = cfg.n, N = st.s.size();
        std::vector<FlowPair> flows;
        ojson ham = ojson::array();
        for (int l = 0; l <= o.lmax; ++l) {
            flows.push_back(H.flow(l));
            const double integral = integrate_real(hamiltonian_density(H, l));
            ojson e{{"l", l}, {"H", integral}};
            if (l == 0) e["local"] = integrate_real(H0_density(st));
            if (l == 1) e["local"] = integrate_real(H1_density(st));
            ham.push_back(e);
        }
        const fs::path dir = prepare_dir(cfg.output.directory);
        {
            auto os = open_out(dir / "hierarchy.csv");
            os << "x";
            for (int l = 0; l <= o.lmax; ++l)
                for (int c = 0; c < n; ++c)
                    for (const char* p : {"re", "i", "j", "k"})
                        os << ",h" << l << '_' << (c == 0 ? std::string("u") : "v" + std::to_string(c)) << '_' << p;
            os << '\n';
            for (int i = 0; i < N; ++i) {
                os << num(st.grid().x(i));
                for (const auto& f : flows)
                    for (int c = 0; c < n; ++c) {
                        const Quat& q = c == 0 ? f.s(i) : f.v(i, c - 1);
                        for (double v : {q.re, q.i, q.j, q.k}) os << ',' << num(v);
                    }
                os << '\n';
            }
        }
        {
            auto os = open_out(dir / "hamiltonians.csv");
            os << "l,H,local\n";
            for (const auto& e : ham)
                os << e["l"].get<int>() << ',' << num(e["H"].get<double>()) << ','
                   << (e.contains("local") ? num(e["local"].get<double>()) : std::string()) << '\n';
        }
        const ojson summary{{"verb", "hierarchy"}, {"lmax", o.lmax}, {"hamiltonians", ham}};
        write_json_file(dir / "hierarchy.json", summary);
        out << summary.dump(2) << '\n';
        return kExitOk;
    });
}

int cmd_reconstruct(const CommandOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, "reconstruct", [&] {
        const RunConfig cfg = resolve_config(o);
        const StatePair st = initial_state(cfg);
        const FrameState fr = reconstruct_frame(st, cfg.output.substeps);
        const CurveSample curve = reconstruct_curve(fr);
        const int margin = 3;
        const GeometricInvariants gi = geometric_invariants(st), ci = curve_invariants(fr, margin);
        const std::vector<double> speed = curve_speed(fr, margin);
        const fs::path dir = prepare_dir(cfg.output.directory);
        {
            auto os = open_out(dir / "curve.csv");
            write_curve_csv(os, curve, st.grid());
        }
        {
            auto os = open_out(dir / "chordal.csv");
            write_chordal_csv(os, curve);
        }
        double dspeed = 0, dinv = 0;
        {
            auto os = open_out(dir / "invariants.csv");
            os << "x,gNN,gNNx,gNxNx,curve_gNN,curve_gNNx,curve_gNxNx,speed\n";
            for (int i = 0; i < st.s.size(); ++i) {
                os << num(st.grid().x(i));
                for (const Field* f : {&gi.gNN, &gi.gNNx, &gi.gNxNx, &ci.gNN, &ci.gNNx, &ci.gNxNx})
                    os << ',' << num(f->re(i));
                os << ',' << num(speed[i]) << '\n';
                if (std::isfinite(speed[i])) dspeed = std::max(dspeed, std::fabs(speed[i] - 1));
                const Field* a[] = {&gi.gNN, &gi.gNNx, &gi.gNxNx};
                const Field* b[] = {&ci.gNN, &ci.gNNx, &ci.gNxNx};
                for (int q = 0; q < 3; ++q)
                    if (std::isfinite(b[q]->re(i))) dinv = std::max(dinv, std::fabs(a[q]->re(i) - b[q]->re(i)));
            }
        }
        const ojson summary{{"verb", "reconstruct"},
                            {"substeps", cfg.output.substeps},
                            {"unitarity_defect", fr.unitarity_defect},
                            {"max_speed_deviation", dspeed},
                            {"max_invariant_deviation", dinv}};
        write_json_file(dir / "frame.json", summary);
        out << summary.dump(2) << '\n';
        return kExitOk;
    });
}

}  // namespace hpn
