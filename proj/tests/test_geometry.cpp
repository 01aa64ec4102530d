#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hpn/checks.hpp"
#include "hpn/flows.hpp"
#include "hpn/geometry.hpp"

using namespace hpn;

namespace {
QMat block_diag(const Quat& a, const QMat& A) {
    const int m = A.rows();
    QMat H(m + 2, m + 2);
    H(0, 0) = a;
    H(1, 1) = a;
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) H(2 + p, 2 + q) = A(p, q);
    return H;
}
}  // namespace

TEST_CASE("frame of the zero state is a one-parameter subgroup") {
    const PeriodicGrid g(64, 10.0);
    for (int n = 1; n <= 2; ++n) {
        const FrameState fr = transport_frame(FieldPair::zeros(g, n));
        CHECK(fr.unitarity_defect < 1e-12);
        const CurveSample c = reconstruct_curve(fr);
        const double s = std::sqrt(chi(n));
        CHECK(c.gamma[0][0].re == doctest::Approx(1.0));
        for (int i = 0; i < g.N; ++i) {
            const QMat ref = expm((g.x(i) / s) * cartan_e(n).matrix());
            CHECK(maxabs(fr.psi[i] - ref) < 1e-12);
            CHECK(abs(c.gamma[i][0]) == doctest::Approx(std::fabs(std::cos(g.x(i) / s))).epsilon(1e-10));
        }
    }
}

TEST_CASE("closed-form invariants") {
    const PeriodicGrid g(128, 2 * M_PI);
    const GeometricInvariants z = geometric_invariants(FieldPair::zeros(g, 2));
    CHECK(z.gNN.maxabs() == 0.0);
    CHECK(z.gNNx.maxabs() == 0.0);
    CHECK(z.gNxNx.maxabs() == 0.0);

    std::mt19937_64 r(31);
    const StatePair st = random_state(g, 2, r);
    const GeometricInvariants gi = geometric_invariants(st);
    CHECK((gi.gNNx - 0.5 * deriv_x(gi.gNN)).maxabs() < 1e-10);
}

TEST_CASE("frame transport is equivariant") {
    std::mt19937_64 r(32);
    const double L = 2 * M_PI;
    const PeriodicGrid g(128, L);
    const StatePair st = localize(random_state(g, 3, r), L / 2, L / 10);
    const Quat a = checks::random_unit(r);
    const QMat A = checks::random_unitary(2, r);
    const FrameState f0 = transport_frame(st);
    const FrameState f1 = transport_frame(equivalence_action(a, A, st));
    const QMat H = block_diag(a, adjoint(A));
    const QMat Hi = adjoint(H);
    double e = 0;
    for (int i = 0; i < g.N; ++i) e = std::max(e, maxabs(f1.psi[i] - H * f0.psi[i] * Hi));
    CHECK(e < 1e-10);
}

TEST_CASE("kink curve has unit speed") {
    const PeriodicGrid g(256, 24.0);
    TransportOptions to;
    to.keep_fine = true;
    to.substeps = 8;
    const FrameState fr = transport_frame(sg_kink(g, 2.0, 12.0, 0.0), to);
    double spread = 0;
    for (double v : curve_speed(fr, 3))
        if (std::isfinite(v)) spread = std::max(spread, std::fabs(v - 1));
    CHECK(spread < 1e-6);
}

TEST_CASE("map residuals on the zero state") {
    const PeriodicGrid g(64, 10.0);
    const std::vector<StatePair> states(3, FieldPair::zeros(g, 2));
    const MapReport m = verify_mkdv_map(states, 1e-3);
    CHECK(m.residual < 1e-10);

    SgOptions o;
    o.richardson = false;
    const SgSolution s = sg_solve_h(states[1], o);
    // only the time difference of psi(t, 0) = exp(t e_t) contributes, at second order in dt
    const WaveReport w = verify_wave_map(states, 1e-3, 1e-3, sg_frame_flow(s), s.c);
    const WaveReport w4 = verify_wave_map(states, 1e-4, 1e-4, sg_frame_flow(s), s.c);
    CHECK(w.residual < 1e-5);
    CHECK(w.residual / w4.residual == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("curve output") {
    const PeriodicGrid g(16, 4.0);
    const CurveSample c = reconstruct_curve(transport_frame(FieldPair::zeros(g, 1)));
    std::ostringstream curve, chord;
    write_curve_csv(curve, c, g);
    write_chordal_csv(chord, c);
    CHECK(!curve.str().empty());
    CHECK(!chord.str().empty());
    const QVec p = gauge_fix(QVec{Quat{0, 0, 2, 0}, Quat{1, 1, 0, 0}});
    CHECK(p[0].re > 0);
    CHECK(std::fabs(p[0].i) + std::fabs(p[0].j) + std::fabs(p[0].k) < 1e-15);
}
