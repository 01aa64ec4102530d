#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hpn/grid.hpp"

using namespace hpn;

namespace {
Field sample(const PeriodicGrid& g, double (*f)(double)) {
    Field r = Field::real(g);
    for (int i = 0; i < g.N; ++i) r.re(i) = f(g.x(i));
    return r;
}
double err(const Field& a, const Field& b) { return (a - b).maxabs(); }
}  // namespace

TEST_CASE("grid construction") {
    CHECK_THROWS_AS(PeriodicGrid(4, 1.0), DomainError);
    CHECK_THROWS_AS(PeriodicGrid(16, 0.0), DomainError);
    const PeriodicGrid g(64, 2 * M_PI);
    CHECK(g.dx() == doctest::Approx(2 * M_PI / 64));
    CHECK(g.wavenumber(3) == doctest::Approx(3.0));
}

TEST_CASE("spectral derivatives of trigonometric samples") {
    const PeriodicGrid g(64, 2 * M_PI);
    const Field s = sample(g, [](double x) { return std::sin(3 * x); });
    const Field c3 = sample(g, [](double x) { return 3 * std::cos(3 * x); });
    CHECK(err(deriv_x(s), c3) < 1e-10);
    const Field s3 = sample(g, [](double x) { return -27 * std::cos(3 * x); });
    CHECK(err(deriv_x(s, 3), s3) < 1e-9);

    Field q = Field::quat(g);
    for (int i = 0; i < g.N; ++i) q(i) = Quat{std::cos(g.x(i)), std::sin(2 * g.x(i)), 0, 1};
    const Field dq = deriv_x(q);
    for (int i = 0; i < g.N; ++i) {
        CHECK(dq(i).re == doctest::Approx(-std::sin(g.x(i))).epsilon(1e-10));
        CHECK(dq(i).i == doctest::Approx(2 * std::cos(2 * g.x(i))).epsilon(1e-10));
        CHECK(std::fabs(dq(i).k) < 1e-12);
    }
}

TEST_CASE("antiderivative conventions") {
    const PeriodicGrid g(64, 2 * M_PI);
    const Field c = sample(g, [](double x) { return std::cos(x); });
    const Field s = sample(g, [](double x) { return std::sin(x); });
    CHECK(err(antideriv_x(c), s) < 1e-12);
    CHECK(err(deriv_x(antideriv_x(s)), s) < 1e-10);

    const Field one = sample(g, [](double) { return 1.0; });
    CHECK_THROWS_AS(antideriv_x(one), NonlocalityError);
    try {
        antideriv_x(one, {}, "block-test");
    } catch (const NonlocalityError& e) {
        CHECK(e.block == "block-test");
        CHECK(e.mean == doctest::Approx(1.0));
    }
    const Field proj = antideriv_x(one + c, {DinvConvention::ZeroMean, MeanPolicy::Project});
    CHECK(err(proj, s) < 1e-12);

    const Field anchored = antideriv_x(s, {DinvConvention::Anchored, MeanPolicy::Strict});
    CHECK(std::fabs(anchored.re(0)) < 1e-14);
    const Field mc = sample(g, [](double x) { return 1.0 - std::cos(x); });
    CHECK(err(anchored, mc) < 1e-12);
}

TEST_CASE("quadrature and pairing") {
    const PeriodicGrid g(32, 3.0);
    const Field one = sample(g, [](double) { return 1.0; });
    CHECK(integrate_real(one) == doctest::Approx(3.0));
    const PeriodicGrid h(64, 2 * M_PI);
    const Field s = sample(h, [](double x) { return std::sin(x); });
    CHECK(pairing(s, s) == doctest::Approx(M_PI));
    CHECK(std::fabs(integrate_real(s)) < 1e-13);
    CHECK(std::fabs(mean(s)[0].re) < 1e-14);
}

TEST_CASE("shift and dealias") {
    const PeriodicGrid g(64, 2 * M_PI);
    const Field s = sample(g, [](double x) { return std::sin(x); });
    const Field c = sample(g, [](double x) { return std::cos(x); });
    CHECK(err(shift(s, M_PI / 2), c) < 1e-12);
    CHECK(err(dealias(s), s) < 1e-14);
    const Field hi = sample(g, [](double x) { return std::cos(30 * x); });
    CHECK(dealias(hi).maxabs() < 1e-13);
}

TEST_CASE("field arithmetic rejects mismatched operands") {
    const PeriodicGrid g(16, 1.0), h(32, 1.0);
    CHECK_THROWS_AS(Field::real(g) + Field::real(h), DimensionError);
    CHECK_THROWS_AS(Field::vector(g, 2) + Field::vector(g, 3), DimensionError);
    CHECK(field_kind_from_string(to_string(FieldKind::Matrix)) == FieldKind::Matrix);
    CHECK(Field::matrix(g, 3).mat_dim() == 3);
}

TEST_CASE("CSV and binary round trips are exact") {
    const PeriodicGrid g(16, 2.5);
    Field v = Field::vector(g, 2);
    for (int i = 0; i < g.N; ++i) v.set_vec(i, QVec{Quat{0.1 * i, 1.0 / 3, -2, M_PI}, Quat{1e-300, 0, 7, i * 1e5}});
    std::stringstream csv;
    write_field_csv(csv, v);
    const Field vc = read_field_csv(csv, FieldKind::Vector, g.L);
    CHECK(vc.width() == 2);
    CHECK(err(vc, v) == 0.0);

    std::stringstream bin;
    write_field_binary(bin, v, 3);
    int n = 0;
    const Field vb = read_field_binary(bin, &n);
    CHECK(n == 3);
    CHECK(vb.grid() == g);
    CHECK(err(vb, v) == 0.0);
}
