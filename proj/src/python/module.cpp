#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hpn/checks.hpp"
#include "hpn/commands.hpp"
#include "hpn/config.hpp"
#include "hpn/flows.hpp"
#include "hpn/geometry.hpp"

namespace py = pybind11;
using namespace hpn;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// u: (N, 4) imaginary quaternions; v: (N, n-1, 4).
StatePair to_state(const Array& u, const Array& v, double L) {
    if (u.ndim() != 2 || u.shape(1) != 4) throw DimensionError("u must have shape (N, 4)");
    if (v.ndim() != 3 || v.shape(2) != 4 || v.shape(0) != u.shape(0))
        throw DimensionError("v must have shape (N, n-1, 4)");
    const int N = static_cast<int>(u.shape(0)), m = static_cast<int>(v.shape(1));
    StatePair st = FieldPair::zeros(PeriodicGrid(N, L), m + 1);
    auto a = u.unchecked<2>();
    auto b = v.unchecked<3>();
    for (int i = 0; i < N; ++i) {
        st.s(i) = Quat{a(i, 0), a(i, 1), a(i, 2), a(i, 3)};
        for (int l = 0; l < m; ++l) st.v(i, l) = Quat{b(i, l, 0), b(i, l, 1), b(i, l, 2), b(i, l, 3)};
    }
    return st;
}

py::tuple from_state(const FieldPair& p) {
    const int N = p.s.size(), m = p.v.width();
    Array u({N, 4}), v({N, m, 4});
    auto a = u.mutable_unchecked<2>();
    auto b = v.mutable_unchecked<3>();
    for (int i = 0; i < N; ++i) {
        const Quat& q = p.s(i);
        a(i, 0) = q.re, a(i, 1) = q.i, a(i, 2) = q.j, a(i, 3) = q.k;
        for (int l = 0; l < m; ++l) {
            const Quat& w = p.v(i, l);
            b(i, l, 0) = w.re, b(i, l, 1) = w.i, b(i, l, 2) = w.j, b(i, l, 3) = w.k;
        }
    }
    return py::make_tuple(u, v);
}

Quat to_quat(const std::array<double, 4>& q) { return {q[0], q[1], q[2], q[3]}; }

OpContext context(const std::string& mode) {
    OpContext c;
    if (mode == "line") c.dinv.convention = DinvConvention::Anchored;
    else if (mode != "periodic") throw ConfigError("mode must be periodic or line");
    return c;
}

SgOptions sg_options(const std::string& mode, const std::string& branch) {
    SgOptions o;
    o.mode = context(mode).dinv.convention == DinvConvention::Anchored ? SgMode::Line : SgMode::Periodic;
    if (branch == "plus") o.branch = SgBranch::Plus;
    else if (branch != "minus") throw ConfigError("branch must be minus or plus");
    o.richardson = false;
    return o;
}

py::list report_to_list(const checks::Report& r) {
    py::list out;
    for (const auto& c : r) {
        py::dict d;
        d["suite"] = c.suite;
        d["name"] = c.name;
        d["criterion"] = c.criterion;
        d["tol"] = c.tol;
        d["observed"] = c.observed;
        d["lower_bound"] = c.lower_bound;
        d["pass"] = c.pass;
        d["note"] = c.note;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bi-Hamiltonian curve flows in quaternionic projective space";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NonlocalityError>(m, "NonlocalityError", PyExc_RuntimeError);
    py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);

    m.def("chi", &chi, py::arg("n"));

    m.def("verify", [](const std::string& scope, std::uint64_t seed, int lmax) {
        checks::CheckOptions o;
        o.seed = seed;
        o.lmax = lmax;
        return report_to_list(checks::run(checks::scope_from_string(scope), o));
    }, py::arg("scope") = "algebra", py::arg("seed") = checks::CheckOptions{}.seed, py::arg("lmax") = 1);

    m.def("mkdv_soliton", [](int N, double L, double a, double x0, double t, const std::array<double, 4>& q) {
        return from_state(mkdv_soliton(PeriodicGrid(N, L), a, x0, t, to_quat(q)));
    }, py::arg("N"), py::arg("L"), py::arg("a"), py::arg("x0"), py::arg("t") = 0.0,
          py::arg("q") = std::array<double, 4>{0, 1, 0, 0});
    m.def("sg_kink", [](int N, double L, double a, double x0, double t) {
        return from_state(sg_kink(PeriodicGrid(N, L), a, x0, t));
    }, py::arg("N"), py::arg("L"), py::arg("a"), py::arg("x0"), py::arg("t") = 0.0);
    m.def("sg_vector_kink", [](int N, double L, int n, double a, double x0, double t, const std::array<double, 4>& q) {
        return from_state(sg_vector_kink(PeriodicGrid(N, L), n, a, x0, t, to_quat(q)));
    }, py::arg("N"), py::arg("L"), py::arg("n"), py::arg("a"), py::arg("x0"), py::arg("t") = 0.0,
          py::arg("q") = std::array<double, 4>{1, 0, 0, 0});

    m.def("mkdv_rhs", [](const Array& u, const Array& v, double L, bool galilean_removed) {
        return from_state(mkdv_rhs(to_state(u, v, L), galilean_removed));
    }, py::arg("u"), py::arg("v"), py::arg("L"), py::arg("galilean_removed") = false);
    m.def("hierarchy_flow", [](const Array& u, const Array& v, double L, int l, const std::string& mode) {
        return from_state(hierarchy_flow(to_state(u, v, L), l, context(mode)));
    }, py::arg("u"), py::arg("v"), py::arg("L"), py::arg("l"), py::arg("mode") = "periodic");
    m.def("hamiltonian", [](const Array& u, const Array& v, double L, int l, const std::string& mode) {
        return integrate_real(hamiltonian_density(to_state(u, v, L), l, context(mode)));
    }, py::arg("u"), py::arg("v"), py::arg("L"), py::arg("l"), py::arg("mode") = "periodic");
    m.def("sg_rhs", [](const Array& u, const Array& v, double L, const std::string& mode, const std::string& branch) {
        return from_state(sg_rhs(to_state(u, v, L), sg_options(mode, branch)));
    }, py::arg("u"), py::arg("v"), py::arg("L"), py::arg("mode") = "line", py::arg("branch") = "minus");

    m.def("simulate", [](const std::string& config_json) {
        const RunConfig cfg = parse_config(config_json);
        SimConfig sc = sim_config(cfg);
        const Trajectory tr = simulate(sc, initial_state(cfg));
        py::list times, us, vs;
        for (const auto& s : tr.snaps) {
            times.append(s.t);
            const py::tuple p = from_state(s.state);
            us.append(p[0]);
            vs.append(p[1]);
        }
        const ConservationReport rep = conserved_report(tr);
        py::dict d;
        d["t"] = times;
        d["u"] = us;
        d["v"] = vs;
        d["drift_H0"] = rep.drift_H0;
        d["drift_H1"] = rep.drift_H1;
        return d;
    }, py::arg("config_json"));

    m.def("reconstruct_curve", [](const Array& u, const Array& v, double L, int substeps) {
        TransportOptions o;
        o.substeps = substeps;
        const CurveSample c = reconstruct_curve(transport_frame(to_state(u, v, L), o));
        const int N = static_cast<int>(c.gamma.size()), k = c.n + 1;
        Array g({N, k, 4});
        auto a = g.mutable_unchecked<3>();
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < k; ++j) {
                const Quat& q = c.gamma[i][j];
                a(i, j, 0) = q.re, a(i, j, 1) = q.i, a(i, j, 2) = q.j, a(i, j, 3) = q.k;
            }
        return g;
    }, py::arg("u"), py::arg("v"), py::arg("L"), py::arg("substeps") = 4);

    m.def("run_command", [](const std::string& verb, const std::optional<std::string>& config_json,
                            const std::optional<std::string>& out, const std::string& scope, int lmax) {
        CommandOptions o;
        o.config_text = config_json;
        o.out = out;
        o.scope = scope;
        o.lmax = lmax;
        std::ostringstream so, se;
        int rc;
        if (verb == "verify") rc = cmd_verify(o, so, se);
        else if (verb == "simulate") rc = cmd_simulate(o, so, se);
        else if (verb == "hierarchy") rc = cmd_hierarchy(o, so, se);
        else if (verb == "reconstruct") rc = cmd_reconstruct(o, so, se);
        else throw ConfigError("unknown verb '" + verb + "'");
        return py::make_tuple(rc, so.str(), se.str());
    }, py::arg("verb"), py::arg("config_json") = py::none(), py::arg("out") = py::none(),
          py::arg("scope") = "all", py::arg("lmax") = 1);
}
