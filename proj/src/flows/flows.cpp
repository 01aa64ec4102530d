#include "hpn/flows.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <json.hpp>
#include <ostream>

#include "hpn/geometry.hpp"
#include "hpn/pointwise.hpp"

namespace hpn {

FieldPair mkdv_rhs(const StatePair& st, bool galilean_removed) {
    const int N = st.s.size(), m = st.v.width();
    const Field u1 = deriv_x(st.s), u2 = deriv_x(st.s, 2), u3 = deriv_x(st.s, 3);
    const Field b1 = deriv_x(st.v), b2 = deriv_x(st.v, 2), b3 = deriv_x(st.v, 3);
    FieldPair r{0.25 * u3, b3};
    const Field C1 = pw::vcomm(st.v, b1), C2 = pw::vcomm(st.v, b2);
    for (int i = 0; i < N; ++i) {
        const Quat u = st.s(i), ux = u1(i);
        const Quat uu = u * u;
        r.s(i) += -1.5 * (uu * ux) + 0.75 * comm_C(u, C1(i)) + 0.75 * C2(i);
        double nb = 0;
        for (int l = 0; l < m; ++l) nb += norm2(st.v(i, l));
        const Quat coef = Quat(nb) - uu + ux;
        const Quat c2 = 2.0 * nb * u - Quat(acomm_re(u, ux)) - C1(i) + u2(i);
        for (int l = 0; l < m; ++l) r.v(i, l) += 1.5 * (coef * b1(i, l)) + 0.75 * (c2 * st.v(i, l));
    }
    r.s.drop_real_part();
    if (!galilean_removed) {
        const double ic = 1.0 / chi(st.n());
        r.s += ic * u1;
        r.v += ic * b1;
    }
    return r;
}

StatePair step_rk4(const StatePair& st, const RhsFn& rhs, double dt, double t) {
    if (dt == 0) return st;
    auto fix = [](StatePair s) {
        s.s.drop_real_part();
        return s;
    };
    const FieldPair k1 = rhs(st);
    const FieldPair k2 = rhs(fix(st + (dt / 2) * k1));
    const FieldPair k3 = rhs(fix(st + (dt / 2) * k2));
    const FieldPair k4 = rhs(fix(st + dt * k3));
    StatePair out = fix(st + (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    if (!out.finite()) throw BlowUpError(t + dt);
    return out;
}

// ---- sine-Gordon ----

namespace {

// coordinates in the basis e, m^q, m_l, m_l^q
Eigen::VectorXd m_coords(const LieElement& g) {
    const int n = g.n();
    Eigen::VectorXd c(4 * n);
    c(0) = g.mpar.a;
    c(1) = g.mperp.s.i;
    c(2) = g.mperp.s.j;
    c(3) = g.mperp.s.k;
    for (int l = 0; l < n - 1; ++l) {
        const Quat& q = g.mperp.v[l];
        c(4 + 4 * l) = q.re;
        c(5 + 4 * l) = q.i;
        c(6 + 4 * l) = q.j;
        c(7 + 4 * l) = q.k;
    }
    return c;
}

LieElement m_from_coords(int n, const Eigen::VectorXd& c) {
    QVec v(n - 1);
    for (int l = 0; l < n - 1; ++l) v[l] = {c(4 + 4 * l), c(5 + 4 * l), c(6 + 4 * l), c(7 + 4 * l)};
    LieElement g(n, MPerp{Quat{0, c(1), c(2), c(3)}, v});
    g.mpar.a = c(0);
    return g;
}

LieElement conjugate(const QMat& Phi, const LieElement& E0) {
    return LieElement::from_matrix(adjoint(Phi) * E0.matrix() * Phi, 1e-8);
}

LieElement periodic_boundary(const FrameState& fr, const SgOptions& opt) {
    const int n = fr.n;
    const double X = chi(n);
    const double sgn = opt.branch == SgBranch::Minus ? -1.0 : 1.0;
    const LieElement e = cartan_e(n);
    // prefer the Cartan direction when it already closes up
    if ((conjugate(fr.end, e) - e).norm_inf() < opt.shooting_tol) return LieElement(n, MPar{sgn * X});
    const auto basis = basis_m(n);
    Eigen::MatrixXd T(4 * n, 4 * n);
    for (int b = 0; b < 4 * n; ++b) T.col(b) = m_coords(conjugate(fr.end, basis[b]) - basis[b]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(4 * n - 1) > opt.shooting_tol * std::max(1.0, sv(0)))
        throw IntegrationAccuracyError("periodic SG mode: no boundary value closes up (smallest singular value " +
                                       std::to_string(sv(4 * n - 1)) + ")");
    Eigen::VectorXd c = svd.matrixV().col(4 * n - 1);
    c *= X / c.norm();
    if (c(0) * sgn < 0) c = -c;
    return m_from_coords(n, c);
}

std::vector<LieElement> solve_E(const StatePair& st, const SgOptions& opt, int substeps) {
    TransportOptions topt;
    topt.substeps = substeps;
    topt.include_e = false;
    const FrameState fr = transport_frame(st, topt);
    const int n = st.n();
    const double X = chi(n);
    const LieElement E0 = opt.mode == SgMode::Periodic
                              ? periodic_boundary(fr, opt)
                              : LieElement(n, MPar{opt.branch == SgBranch::Minus ? -X : X});
    std::vector<LieElement> E;
    E.reserve(fr.psi.size());
    for (const auto& P : fr.psi) E.push_back(conjugate(P, E0));
    return E;
}

}  // namespace

SgSolution sg_solve_h(const StatePair& st, const SgOptions& opt) {
    const int n = st.n(), N = st.s.size(), m = n - 1;
    const double X = chi(n);
    SgSolution sol;
    sol.E = solve_E(st, opt, opt.substeps);
    if (opt.richardson) {
        const auto E2 = solve_E(st, opt, 2 * opt.substeps);
        for (int j = 0; j < N; ++j) sol.richardson_err = std::max(sol.richardson_err, (sol.E[j] - E2[j]).norm_inf());
        sol.richardson_err /= X;
        if (sol.richardson_err > opt.richardson_tol)
            throw IntegrationAccuracyError("SG x-solve: Richardson estimate " + std::to_string(sol.richardson_err) +
                                           " exceeds tolerance; increase substeps or resolution");
    }
    sol.h = FieldPair::zeros(st.grid(), n);
    sol.h_par = Field::real(st.grid());
    for (int j = 0; j < N; ++j) {
        const LieElement& E = sol.E[j];
        sol.h_par.re(j) = E.mpar.a;
        sol.h.s(j) = 2.0 * E.mperp.s;
        for (int l = 0; l < m; ++l) sol.h.v(j, l) = -1.0 * E.mperp.v[l];
    }
    sol.c = X * X;
    const Field q = sg_constraint(sol);
    for (int j = 0; j < N; ++j) sol.constraint_dev = std::max(sol.constraint_dev, std::fabs(q.re(j) - sol.c) / sol.c);
    if (sol.constraint_dev > opt.constraint_tol)
        throw IntegrationAccuracyError("SG constraint drift " + std::to_string(sol.constraint_dev));
    return sol;
}

Field sg_constraint(const SgSolution& s) {
    Field q = Field::real(s.h_par.grid());
    for (int j = 0; j < q.size(); ++j) {
        double b = 0;
        for (int l = 0; l < s.h.v.width(); ++l) b += norm2(s.h.v(j, l));
        q.re(j) = s.h_par.re(j) * s.h_par.re(j) + 0.25 * norm2(s.h.s(j)) + b;
    }
    return q;
}

std::vector<LieElement> sg_frame_flow(const SgSolution& s) {
    std::vector<LieElement> out;
    out.reserve(s.E.size());
    const double f = 1.0 / std::sqrt(chi(s.E.empty() ? 1 : s.E.front().n()));
    for (const auto& E : s.E) out.push_back(f * E);
    return out;
}

FieldPair sg_rhs(const StatePair& st, const SgOptions& opt, SgSolution* out) {
    SgSolution sol = sg_solve_h(st, opt);
    FieldPair r = (1.0 / chi(st.n())) * sol.h;
    if (out) *out = std::move(sol);
    return r;
}

StatePair sg_step(const StatePair& st, double dt, const SgOptions& opt, double t) {
    return step_rk4(st, [&](const StatePair& s) { return sg_rhs(s, opt); }, dt, t);
}

// ---- driver ----

const char* to_string(FlowKind k) {
    switch (k) {
        case FlowKind::Mkdv: return "mkdv";
        case FlowKind::Sg: return "sg";
        case FlowKind::Hierarchy: return "hierarchy";
    }
    return "?";
}

double resolve_dt(const SimConfig& cfg, const PeriodicGrid& g, int* steps) {
    if (cfg.t_end < 0) throw ConfigError("t_end must be non-negative");
    if (cfg.cfl <= 0) throw ConfigError("cfl must be positive");
    const int order = cfg.kind == FlowKind::Mkdv ? 3 : cfg.kind == FlowKind::Hierarchy ? 2 * cfg.l + 1 : 1;
    const double bound = cfg.cfl * std::pow(g.dx(), order);
    double dt = cfg.dt > 0 ? cfg.dt : bound;
    if (cfg.dt < 0) throw ConfigError("dt must be positive");
    if (dt > bound * (1 + 1e-12))
        throw ConfigError("dt = " + std::to_string(dt) + " exceeds the stability bound cfl*dx^" +
                          std::to_string(order) + " = " + std::to_string(bound));
    int k = cfg.t_end > 0 ? static_cast<int>(std::ceil(cfg.t_end / dt - 1e-9)) : 0;
    if (k > 0) dt = cfg.t_end / k;
    if (steps) *steps = k;
    return dt;
}

RhsFn make_rhs(const SimConfig& cfg) {
    RhsFn base;
    switch (cfg.kind) {
        case FlowKind::Mkdv:
            base = [gal = cfg.galilean_removed](const StatePair& s) { return mkdv_rhs(s, gal); };
            break;
        case FlowKind::Sg:
            base = [opt = cfg.sg](const StatePair& s) { return sg_rhs(s, opt); };
            break;
        case FlowKind::Hierarchy:
            if (cfg.l < 0) throw ConfigError("hierarchy level must be >= 0");
            base = [l = cfg.l, gal = cfg.galilean_removed, d = cfg.dinv](const StatePair& s) {
                FieldPair r = hierarchy_flow(s, l, OpContext{d});
                if (!gal) r += (1.0 / chi(s.n())) * deriv_x(s);
                return r;
            };
            break;
    }
    if (!cfg.dealias) return base;
    return [base](const StatePair& s) {
        FieldPair r = base(s);
        return FieldPair{dealias(r.s), dealias(r.v)};
    };
}

Trajectory simulate(const SimConfig& cfg, const StatePair& init, const std::function<void(const Snapshot&)>& observer) {
    if (cfg.cadence < 1) throw ConfigError("cadence must be >= 1");
    int steps = 0;
    const double dt = resolve_dt(cfg, init.grid(), &steps);
    const RhsFn rhs = make_rhs(cfg);
    Trajectory tr;
    tr.kind = cfg.kind;
    auto record = [&](double t, const StatePair& s) {
        Snapshot sn{t, s, 0, 0};
        if (cfg.kind == FlowKind::Sg) {
            SgOptions o = cfg.sg;
            o.richardson = false;
            const SgSolution sol = sg_solve_h(s, o);
            sn.sg_constraint_dev = sol.constraint_dev;
            sn.sg_c = sol.c;
        }
        if (observer) observer(sn);
        tr.snaps.push_back(std::move(sn));
    };
    StatePair s = init;
    record(0, s);
    for (int k = 1; k <= steps; ++k) {
        s = step_rk4(s, rhs, dt, (k - 1) * dt);
        if (k % cfg.cadence == 0 || k == steps) record(k * dt, s);
    }
    return tr;
}

ConservationReport conserved_report(const Trajectory& tr) {
    ConservationReport r;
    for (const auto& sn : tr.snaps) {
        r.times.push_back(sn.t);
        r.H0.push_back(integrate_real(H0_density(sn.state)));
        r.H1.push_back(integrate_real(H1_density(sn.state)));
        r.H0_alt.push_back(integrate_real(H0_density_alt(sn.state)));
        r.sg_dev.push_back(sn.sg_constraint_dev);
    }
    auto drift = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        const double den = std::fabs(v.front()) > 0 ? std::fabs(v.front()) : 1.0;
        double d = 0;
        for (double x : v) d = std::max(d, std::fabs(x - v.front()) / den);
        return d;
    };
    r.drift_H0 = drift(r.H0);
    r.drift_H1 = drift(r.H1);
    for (double x : r.sg_dev) r.sg_dev_max = std::max(r.sg_dev_max, x);
    return r;
}

void ConservationReport::to_json(std::ostream& os) const {
    nlohmann::json j;
    j["times"] = times;
    j["H0"] = H0;
    j["H1"] = H1;
    j["H0_alt"] = H0_alt;
    j["sg_constraint_dev"] = sg_dev;
    j["max_relative_drift"] = {{"H0", drift_H0}, {"H1", drift_H1}, {"sg_constraint", sg_dev_max}};
    os << j.dump(2) << '\n';
}

void ConservationReport::to_csv(std::ostream& os) const {
    os << "t,H0,H1,H0_alt,sg_constraint_dev\n";
    char buf[160];
    for (size_t k = 0; k < times.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17e,%.17e,%.17e,%.17e,%.17e\n", times[k], H0[k], H1[k], H0_alt[k],
                      sg_dev[k]);
        os << buf;
    }
}

// ---- reference solutions ----

StatePair mkdv_soliton(const PeriodicGrid& g, double a, double x0, double t, const Quat& q) {
    StatePair st = FieldPair::zeros(g, 1);
    for (int i = 0; i < g.N; ++i) st.s(i) = (a / std::cosh(a * (g.x(i) - x0 + a * a * t / 4))) * q;
    return st;
}

double sg_kink_psi(double a, double xi, double t) { return 4 * std::atan(std::exp(a * xi + 4 * t / a)); }

StatePair sg_kink(const PeriodicGrid& g, double a, double x0, double t, const Quat& q) {
    StatePair st = FieldPair::zeros(g, 1);
    for (int i = 0; i < g.N; ++i) st.s(i) = (a / std::cosh(a * (g.x(i) - x0) + 4 * t / a)) * q;
    return st;
}

StatePair sg_vector_kink(const PeriodicGrid& g, int n, double a, double x0, double t, const Quat& q) {
    if (n < 2) throw DomainError("the vector kink needs n >= 2");
    StatePair st = FieldPair::zeros(g, n);
    for (int i = 0; i < g.N; ++i) st.v(i, 0) = (2 * a / std::cosh(a * (g.x(i) - x0) + t / a)) * q;
    return st;
}

}  // namespace hpn
