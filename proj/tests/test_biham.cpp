#include <doctest.h>

#include <cmath>
#include <random>

#include "hpn/biham.hpp"
#include "hpn/pointwise.hpp"

using namespace hpn;

namespace {
OpContext project() {
    OpContext c;
    c.dinv.policy = MeanPolicy::Project;
    return c;
}
OpContext anchored() {
    OpContext c;
    c.dinv.convention = DinvConvention::Anchored;
    return c;
}
// u = f(x) i with f a smooth periodic profile
StatePair fixed_direction(const PeriodicGrid& g, int n) {
    StatePair st = FieldPair::zeros(g, n);
    for (int i = 0; i < g.N; ++i) {
        const double x = g.x(i);
        st.s(i) = Quat{0, 0.7 * std::sin(x) + 0.3 * std::cos(2 * x), 0, 0};
    }
    return st;
}
double rel(const Field& a, const Field& b) { return (a - b).maxabs() / std::max(1.0, b.maxabs()); }
}  // namespace

TEST_CASE("H maps the state to its derivative") {
    std::mt19937_64 r(11);
    const PeriodicGrid g(128, 2 * M_PI);
    const StatePair st = random_state(g, 3, r);
    const FlowPair h = apply_H(st, st);
    const FieldPair dx = deriv_x(st);
    CHECK(rel(h.s, dx.s) < 1e-10);
    CHECK(rel(h.v, dx.v) < 1e-10);
    const FlowPair z = apply_H(st, FieldPair::zeros(g, 3));
    CHECK(z.maxabs() == 0.0);
}

TEST_CASE("operators on the zero state") {
    std::mt19937_64 r(12);
    const PeriodicGrid g(64, 2 * M_PI);
    const StatePair zero = FieldPair::zeros(g, 2);
    const CovectorPair w = random_state(g, 2, r);
    const FlowPair h = apply_H(zero, w, project());
    const FieldPair dw = deriv_x(w);
    CHECK(rel(h.s, dw.s) < 1e-10);
    CHECK(rel(h.v, dw.v) < 1e-10);
    CHECK(hierarchy_flow(zero, 0).maxabs() == 0.0);
    CHECK(hierarchy_flow(zero, 1).maxabs() == 0.0);
}

TEST_CASE("scalar reductions") {
    const double L = 2 * M_PI;
    const PeriodicGrid g(256, L);
    const StatePair st = localize(fixed_direction(g, 1), L / 2, L / 10);
    const Field u = st.s, ux = deriv_x(u), uxx = deriv_x(u, 2), uxxx = deriv_x(u, 3);

    FlowPair h = FieldPair::zeros(g, 1);
    h.s = ux;
    Field j_ref = 0.25 * uxx;
    Field r_ref = 0.25 * uxxx;
    for (int i = 0; i < g.N; ++i) {
        j_ref(i) -= 0.5 * (u(i) * u(i) * u(i));
        r_ref(i) -= 1.5 * (u(i) * u(i) * ux(i));
    }
    CHECK(rel(apply_J(st, h, anchored()).s, j_ref) < 1e-10);
    CHECK(rel(apply_R(st, h, anchored()).s, r_ref) < 1e-10);
    CHECK(rel(hierarchy_flow(st, 1, anchored()).s, r_ref) < 1e-10);

    // With a fixed direction the commutator terms vanish and H reduces to D.
    CovectorPair w = FieldPair::zeros(g, 1);
    w.s = uxx;
    CHECK(rel(apply_H(st, w).s, uxxx) < 1e-10);
}

TEST_CASE("zero-mean antiderivatives shift the scalar flow along u_x") {
    const PeriodicGrid g(128, 2 * M_PI);
    const StatePair st = fixed_direction(g, 1);
    const Field u = st.s, ux = deriv_x(u);
    Field r_ref = 0.25 * deriv_x(u, 3);
    for (int i = 0; i < g.N; ++i) r_ref(i) -= 1.5 * (u(i) * u(i) * ux(i));
    const Field d = hierarchy_flow(st, 1).s - r_ref;
    const double k = pairing(d, ux) / pairing(ux, ux);
    CHECK(std::fabs(k) > 1e-3);
    CHECK((d - k * ux).maxabs() < 1e-10);
}

TEST_CASE("level zero is the translation flow") {
    std::mt19937_64 r(13);
    const PeriodicGrid g(128, 2 * M_PI);
    const StatePair st = random_state(g, 2, r);
    const FlowPair h0 = hierarchy_flow(st, 0);
    const FieldPair dx = deriv_x(st);
    CHECK(rel(h0.s, dx.s) < 1e-12);
    CHECK(rel(h0.v, dx.v) < 1e-12);
}

TEST_CASE("hierarchy flows scale with weight 2 + 2l") {
    std::mt19937_64 r(14);
    const double lam = 1.7, L = 2 * M_PI;
    const PeriodicGrid g(128, L), gs(128, L / lam);
    const StatePair st = localize(random_state(g, 2, r), L / 2, L / 10);
    StatePair sc = FieldPair::zeros(gs, 2);
    for (int i = 0; i < g.N; ++i) {
        sc.s(i) = lam * st.s(i);
        sc.v.set_vec(i, lmul(Quat{lam, 0, 0, 0}, st.v.vec_at(i)));
    }
    for (int l = 0; l <= 2; ++l) {
        const FlowPair a = hierarchy_flow(st, l, anchored());
        const FlowPair b = hierarchy_flow(sc, l, anchored());
        const double w = std::pow(lam, 2 + 2 * l);
        double e = 0;
        for (int i = 0; i < g.N; ++i) {
            e = std::max(e, maxabs(b.s(i) - w * a.s(i)));
            e = std::max(e, maxabs(b.v.vec_at(i) - w * a.v.vec_at(i)));
        }
        CHECK(e / std::max(1.0, w * a.maxabs()) < 1e-9);
    }
}

TEST_CASE("h_par of the translation flow is the H0 density") {
    std::mt19937_64 r(15);
    const double L = 2 * M_PI;
    const PeriodicGrid g(256, L);
    const StatePair st = localize(random_state(g, 2, r, 4, 1.0), L / 2, L / 10);
    const Field hp = h_parallel(st, deriv_x(st), anchored());
    const Field d = H0_density(st);
    Field shifted = d;
    for (int i = 0; i < g.N; ++i) shifted.re(i) -= d.re(0);
    CHECK(rel(hp, shifted) < 1e-10);
    CHECK(rel(hamiltonian_density(st, 0, anchored()), shifted) < 1e-10);
}

TEST_CASE("local densities") {
    const PeriodicGrid g(32, 1.0);
    StatePair st = FieldPair::zeros(g, 2);
    for (int i = 0; i < g.N; ++i) {
        st.s(i) = Quat{0, 1, 2, 0};
        st.v(i, 0) = Quat{1, 0, 0, 2};
    }
    const Field h0 = H0_density(st), p = H0_density_alt(st);
    CHECK(h0.re(3) == doctest::Approx(0.5 * 5 + 0.5 * 5));
    CHECK(p.re(3) == doctest::Approx(0.5 * 5 + 5));
    CHECK(H1_density(FieldPair::zeros(g, 2)).maxabs() == 0.0);
}

TEST_CASE("Poisson bracket of a functional with itself vanishes") {
    std::mt19937_64 r(16);
    const PeriodicGrid g(32, 2 * M_PI);
    const StatePair st = random_state(g, 2, r, 3, 0.4);
    const double b = poisson_bracket(st, H0_density, H0_density, project());
    CHECK(std::fabs(b) < 1e-7);
    const double b1 = poisson_bracket(st, H1_density, H1_density, project());
    CHECK(std::fabs(b1) < 1e-6);
}
