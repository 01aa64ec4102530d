#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hpn/flows.hpp"

using namespace hpn;

namespace {
double rel(const FieldPair& a, const FieldPair& b) { return (a - b).maxabs() / std::max(1.0, b.maxabs()); }
SgOptions line_opts() {
    SgOptions o;
    o.mode = SgMode::Line;
    o.richardson = false;
    return o;
}
}  // namespace

TEST_CASE("mKdV right side") {
    std::mt19937_64 r(21);
    const PeriodicGrid g(128, 2 * M_PI);
    CHECK(mkdv_rhs(FieldPair::zeros(g, 2)).maxabs() == 0.0);

    const StatePair st = random_state(g, 2, r);
    const FieldPair diff = mkdv_rhs(st, false) - mkdv_rhs(st, true);
    CHECK(rel(diff, (1.0 / chi(2)) * deriv_x(st)) < 1e-12);

    StatePair s1 = FieldPair::zeros(g, 1);
    s1.s = st.s;
    const Field u = s1.s, ux = deriv_x(u);
    Field ref = 0.25 * deriv_x(u, 3);
    for (int i = 0; i < g.N; ++i) ref(i) -= 1.5 * (u(i) * u(i) * ux(i));
    CHECK((mkdv_rhs(s1, true).s - ref).maxabs() / ref.maxabs() < 1e-10);
    CHECK(mkdv_rhs(s1, true).s.max_real_part() < 1e-12);
}

TEST_CASE("RK4 stepping") {
    std::mt19937_64 r(22);
    const PeriodicGrid g(64, 2 * M_PI);
    const StatePair st = random_state(g, 2, r);
    const RhsFn adv = [](const StatePair& p) { return deriv_x(p); };
    CHECK(rel(step_rk4(st, adv, 0.0), st) == 0.0);

    // u_t = u_x translates by t
    auto run = [&](int steps) {
        StatePair p = st;
        const double T = 0.5, dt = T / steps;
        for (int k = 0; k < steps; ++k) p = step_rk4(p, adv, dt, k * dt);
        StatePair exact = st;
        exact.s = shift(st.s, T);
        exact.v = shift(st.v, T);
        return (p - exact).maxabs();
    };
    const double e1 = run(20), e2 = run(40);
    CHECK(e1 < 1e-4);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));

    const RhsFn bad = [](const StatePair& p) {
        FieldPair q = p;
        q.s(0) = Quat{0, std::numeric_limits<double>::quiet_NaN(), 0, 0};
        return q;
    };
    CHECK_THROWS_AS(step_rk4(st, bad, 0.1, 1.0), BlowUpError);
}

TEST_CASE("CFL bound") {
    const PeriodicGrid g(64, 2 * M_PI);
    SimConfig c;
    c.t_end = 1e-3;
    int steps = 0;
    const double dt = resolve_dt(c, g, &steps);
    CHECK(dt > 0);
    CHECK(steps * dt == doctest::Approx(1e-3));
    c.dt = 1.0;
    CHECK_THROWS_AS(resolve_dt(c, g), ConfigError);
}

TEST_CASE("SG on the zero state") {
    const PeriodicGrid g(64, 8.0);
    for (int n = 1; n <= 2; ++n) {
        const StatePair z = FieldPair::zeros(g, n);
        const SgSolution s = sg_solve_h(z, line_opts());
        CHECK(s.c == doctest::Approx(chi(n) * chi(n)));
        CHECK(s.h.maxabs() < 1e-12);
        for (int i = 0; i < g.N; ++i) CHECK(s.h_par.re(i) == doctest::Approx(-chi(n)));
        SgOptions plus = line_opts();
        plus.branch = SgBranch::Plus;
        CHECK(sg_solve_h(z, plus).h_par.re(5) == doctest::Approx(chi(n)));
        CHECK(sg_rhs(z, line_opts()).maxabs() < 1e-12);
        CHECK(sg_step(z, 0.01, line_opts()).maxabs() < 1e-12);
    }
}

TEST_CASE("SG constraint holds pointwise") {
    const PeriodicGrid g(256, 24.0);
    const StatePair st = sg_kink(g, 2.0, 12.0, 0.0);
    const SgSolution s = sg_solve_h(st, line_opts());
    const Field c = sg_constraint(s);
    for (int i = 0; i < g.N; ++i) CHECK(c.re(i) / s.c == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.constraint_dev < 1e-8);
}

TEST_CASE("kink solutions match the SG right side") {
    const PeriodicGrid g(256, 24.0);
    const double a = 2.0, x0 = 12.0, d = 1e-4;
    {
        const FieldPair dt = (1.0 / (2 * d)) * (sg_kink(g, a, x0, d) - sg_kink(g, a, x0, -d));
        CHECK(rel(sg_rhs(sg_kink(g, a, x0, 0.0), line_opts()), dt) < 1e-6);
    }
    {
        const Quat q{0.5, 0.5, -0.5, 0.5};
        const FieldPair dt = (1.0 / (2 * d)) * (sg_vector_kink(g, 2, a, x0, d, q) - sg_vector_kink(g, 2, a, x0, -d, q));
        CHECK(rel(sg_rhs(sg_vector_kink(g, 2, a, x0, 0.0, q), line_opts()), dt) < 1e-6);
        CHECK_THROWS_AS(sg_vector_kink(g, 1, a, x0, 0.0), DomainError);
    }
}

TEST_CASE("mKdV soliton reference") {
    const PeriodicGrid g(256, 24.0);
    const double d = 1e-5;
    const FieldPair dt = (1.0 / (2 * d)) * (mkdv_soliton(g, 2.0, 12.0, d) - mkdv_soliton(g, 2.0, 12.0, -d));
    CHECK(rel(mkdv_rhs(mkdv_soliton(g, 2.0, 12.0, 0.0), true), dt) < 1e-6);
}

TEST_CASE("simulation driver and conservation report") {
    const PeriodicGrid g(64, 2 * M_PI);
    SimConfig c;
    c.t_end = 1e-3;
    c.cadence = 1;
    const Trajectory tr = simulate(c, FieldPair::zeros(g, 2));
    CHECK(tr.snaps.size() >= 2);
    CHECK(tr.snaps.front().t == 0.0);
    CHECK(tr.snaps.back().t == doctest::Approx(1e-3));
    const ConservationReport rep = conserved_report(tr);
    CHECK(rep.drift_H0 == 0.0);
    CHECK(rep.drift_H1 == 0.0);
    CHECK(std::string(to_string(FlowKind::Sg)) == "sg");

    SimConfig none;
    const Trajectory t0 = simulate(none, FieldPair::zeros(g, 1));
    CHECK(t0.snaps.size() == 1);
}
