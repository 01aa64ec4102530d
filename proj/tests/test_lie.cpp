#include <doctest.h>

#include <random>

#include "hpn/checks.hpp"
#include "hpn/lie.hpp"

using namespace hpn;
using checks::random_element;

TEST_CASE("packing round trip and anti-Hermitian matrices") {
    std::mt19937_64 r(1);
    for (int n = 1; n <= 3; ++n) {
        const LieElement g = random_element(n, r);
        const QMat m = g.matrix();
        CHECK(m.rows() == n + 1);
        CHECK(antihermitian_defect(m) == 0.0);
        CHECK((LieElement::from_matrix(m) - g).norm_inf() < 1e-15);
    }
    QMat bad = QMat::identity(3);
    CHECK_THROWS_AS(LieElement::from_matrix(bad), DomainError);
    CHECK_THROWS_AS(LieElement::from_matrix(QMat(2, 3)), DimensionError);
}

TEST_CASE("bracket basics") {
    std::mt19937_64 r(2);
    const int n = 2;
    const LieElement a(n, MPar{1.5}), b(n, MPar{-0.5});
    CHECK(bracket(a, b).norm_inf() == 0.0);
    const LieElement g = random_element(n, r);
    CHECK(bracket(g, g).norm_inf() < 1e-14);
    const LieElement x = random_element(n, r), y = random_element(n, r), z = random_element(n, r);
    CHECK((bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))).norm_inf() < 1e-12);
}

TEST_CASE("closed-form brackets against worked values") {
    const int n = 2;
    const MPar a{1.5};
    const MPerp m{Quat{0, 1, -2, 0.5}, QVec{Quat{1, 0, 2, -1}}};
    const HPerp h = bracket(a, m);
    CHECK(maxabs(h.s - 2 * 1.5 * m.s) == 0.0);
    CHECK(maxabs(h.v - (-1.5) * m.v) == 0.0);

    const HPerp h1{Quat{0, 1, 0, 2}, QVec{Quat{1, -1, 0.5, 0}}};
    const HPerp h2{Quat{0, -0.5, 3, 0}, QVec{Quat{0, 2, 1, 1}}};
    const HPerp p = bracket_hperp(h1, h2);
    CHECK(maxabs(p.s - 0.5 * comm_C(h1.v, h2.v)) < 1e-14);
    CHECK(maxabs(p.v - (lmul(h2.s, h1.v) - lmul(h1.s, h2.v))) < 1e-14);
    const LieElement full = bracket(LieElement(n, h1), LieElement(n, h2));
    CHECK((full.project(Subspace::HPerp) - LieElement(n, p)).norm_inf() < 1e-14);
}

TEST_CASE("projected bracket rejects arguments outside the declared subspaces") {
    std::mt19937_64 r(3);
    const LieElement x = random_element(2, Subspace::MPerp, r), y = random_element(2, Subspace::HPar, r);
    CHECK_THROWS_AS(bracket_projected(y, Subspace::MPerp, x, Subspace::MPerp, Subspace::HPar), DomainError);
    CHECK_NOTHROW(bracket_projected(x, Subspace::MPerp, x, Subspace::MPerp, Subspace::HPar));
}

TEST_CASE("Killing form values") {
    for (int n = 1; n <= 3; ++n) {
        const LieElement e = cartan_e(n);
        CHECK(killing(e, e) == doctest::Approx(-chi(n)));
        CHECK(killing_m(MPar{1}, MPerp{Quat{}, QVec(n - 1)}, MPar{1}, MPerp{Quat{}, QVec(n - 1)}, n) ==
              doctest::Approx(-chi(n)));
        CHECK(killing(e, LieElement(n)) == 0.0);
    }
    std::mt19937_64 r(4);
    const LieElement x = random_element(2, r), y = random_element(2, r);
    CHECK(killing(x, y) == doctest::Approx(killing_trace_ad(x, y)).epsilon(1e-12));
    CHECK(killing(x, y) == doctest::Approx(killing_components(x, y)).epsilon(1e-12));
}

TEST_CASE("ad(e) and its inverses") {
    const HPerp h{Quat{0, 1, 2, 3}, QVec{Quat{1, 2, 3, 4}}};
    const MPerp m = ad_e(h);
    CHECK(maxabs(m.s - (-2.0) * h.s) == 0.0);
    CHECK(maxabs(m.v - h.v) == 0.0);
    const HPerp back = ad_e(m);
    CHECK(maxabs(back.s - (-4.0) * h.s) == 0.0);
    CHECK(maxabs(back.v - (-1.0) * h.v) == 0.0);
    const MPerp z = ad_e(HPerp{Quat{}, QVec(1)});
    CHECK(maxabs(z.s) == 0.0);
    CHECK(maxabs(z.v) == 0.0);
    const HPerp hi = ad_e_inv(m);
    CHECK(maxabs(hi.s - h.s) == 0.0);
    CHECK(maxabs(hi.v - h.v) == 0.0);
}

TEST_CASE("equivalence action") {
    const HPerp h{Quat{0, 1, 0, 0}, QVec{Quat{1, 2, 3, 4}}};
    const HPerp same = equivalence_action(kOne, QMat::identity(1), h);
    CHECK(maxabs(same.s - h.s) == 0.0);
    CHECK(maxabs(same.v - h.v) == 0.0);
    const HPerp rot = equivalence_action(kJ, QMat::identity(1), HPerp{kI, QVec(1)});
    CHECK(maxabs(rot.s - (-1.0) * kI) < 1e-15);
    std::mt19937_64 r(5);
    for (int t = 0; t < 20; ++t) {
        const Quat a = checks::random_unit(r);
        const QMat A = checks::random_unitary(2, r);
        const HPerp x = random_element(3, Subspace::HPerp, r).hperp;
        const HPerp gx = equivalence_action(a, A, x);
        CHECK(killing_h(gx, gx, 3) == doctest::Approx(killing_h(x, x, 3)).epsilon(1e-12));
        // conjugation by diag(a, a, A*) acts as (a, A) on the vector part
        const LieElement ad = adjoint_action(a, adjoint(A), LieElement(3, x));
        CHECK((ad - LieElement(3, gx)).norm_inf() < 1e-12);
    }
    CHECK_THROWS_AS(equivalence_action(Quat{2, 0, 0, 0}, QMat::identity(1), h), DomainError);
}

TEST_CASE("basis of m") {
    for (int n = 1; n <= 3; ++n) {
        const auto b = basis_m(n);
        CHECK(static_cast<int>(b.size()) == 4 * n);
        for (size_t p = 0; p < b.size(); ++p)
            for (size_t q = 0; q < b.size(); ++q) {
                const double k = killing(b[p], b[q]);
                if (p != q) CHECK(std::fabs(k) < 1e-12);
                else CHECK(k < 0);
            }
        CHECK(static_cast<int>(basis_g(n).size()) == (n + 1) * (2 * n + 3));
    }
}

TEST_CASE("matrix exponential of an algebra element is unitary") {
    std::mt19937_64 r(6);
    const QMat m = random_element(3, r).matrix();
    const QMat u = expm(m);
    CHECK(maxabs(u * adjoint(u) - QMat::identity(4)) < 1e-12);
    CHECK(maxabs(unembed(embed(m)) - m) == 0.0);
}
