#include <doctest.h>

#include <random>

#include "hpn/quat.hpp"

using namespace hpn;

namespace {
Quat rq(std::mt19937_64& r) {
    std::normal_distribution<double> n;
    return {n(r), n(r), n(r), n(r)};
}
}  // namespace

TEST_CASE("generator products") {
    CHECK(kI * kJ == kK);
    CHECK(kJ * kI == -kK);
    CHECK(kOne * Quat{1, 2, 3, 4} == Quat{1, 2, 3, 4});
    CHECK((kOne + kI) * (kOne + kJ) == Quat{1, 1, 1, 1});
    CHECK(maxabs(kI * kJ * kK + kOne) == 0.0);
}

TEST_CASE("norm and conjugation laws") {
    std::mt19937_64 r(1);
    for (int t = 0; t < 200; ++t) {
        const Quat a = rq(r), b = rq(r);
        CHECK(maxabs(conj(a * b) - conj(b) * conj(a)) < 1e-13);
        CHECK(std::fabs((a * conj(a)).re - norm2(a)) < 1e-13);
        CHECK(maxabs(im(a * conj(a))) < 1e-13);
        const Quat u = im(a);
        CHECK(maxabs(u + conj(u)) == 0.0);
        CHECK(std::fabs((u * u).re + norm2(u)) < 1e-13);
        CHECK(maxabs(im(u * u)) < 1e-13);
    }
}

TEST_CASE("imaginary quaternion guard") {
    CHECK_THROWS_AS(ImQuat::from(Quat{1, 0, 0, 0}), DomainError);
    const ImQuat q = ImQuat::from(Quat{0, 1, 2, 3});
    CHECK(Quat(q) == Quat{0, 1, 2, 3});
}

TEST_CASE("hermitian inner product") {
    const QVec x{kI, kJ};
    CHECK(hermitian_inner(x, x) == Quat{2, 0, 0, 0});
    CHECK(hermitian_inner(x, QVec(2)) == Quat{});
    std::mt19937_64 r(2);
    for (int t = 0; t < 100; ++t) {
        const QVec a{rq(r), rq(r), rq(r)}, b{rq(r), rq(r), rq(r)};
        CHECK(maxabs(conj(hermitian_inner(a, b)) - hermitian_inner(b, a)) < 1e-13);
        const Quat aa = hermitian_inner(a, a);
        CHECK(aa.re >= 0);
        CHECK(maxabs(im(aa)) < 1e-13);
        // Re<a,b> is the Euclidean product of the real coordinates
        double dot = 0;
        for (int l = 0; l < 3; ++l) dot += a[l].re * b[l].re + a[l].i * b[l].i + a[l].j * b[l].j + a[l].k * b[l].k;
        CHECK(std::fabs(hermitian_inner(a, b).re - dot) < 1e-12);
    }
}

TEST_CASE("commutators and anticommutators") {
    CHECK(comm_C(kI, kJ) == Quat{0, 0, 0, 2});
    CHECK(comm_C(kK, kK) == Quat{});
    CHECK(comm_C(QVec{kOne, kI}, QVec{kJ, Quat{}}) == Quat{0, 0, -2, 0});
    CHECK(acomm_A(kI, kI) == doctest::Approx(-2.0));
    CHECK(acomm_A(kI, Quat{}) == 0.0);
    const QVec a{Quat{1, 2, 0, -1}, Quat{0.5, 0, 3, 0}};
    CHECK(acomm_A(a, a) == doctest::Approx(2 * norm2(a)));
    CHECK_THROWS_AS(acomm_A(kOne, kI), DomainError);
}

TEST_CASE("matrix commutator") {
    const QMat c = matcomm_C(QVec{kOne}, QVec{kI});
    REQUIRE(c.rows() == 1);
    CHECK(c(0, 0) == Quat{0, 2, 0, 0});
    std::mt19937_64 r(3);
    const QVec a{rq(r), rq(r)}, b{rq(r), rq(r)};
    CHECK(maxabs(matcomm_C(a, a)) == 0.0);
    CHECK(antihermitian_defect(matcomm_C(a, b)) < 1e-13);
}

TEST_CASE("quaternion matrices") {
    std::mt19937_64 r(4);
    QMat a(2, 3), b(3, 2);
    for (auto& q : a.data()) q = rq(r);
    for (auto& q : b.data()) q = rq(r);
    CHECK(maxabs(adjoint(a * b) - adjoint(b) * adjoint(a)) < 1e-12);
    CHECK(maxabs(QMat::identity(2) * a - a) == 0.0);
}
