#include "hpn/state.hpp"

#include <cmath>

#include "hpn/lie.hpp"

namespace hpn {

FieldPair::FieldPair(Field scalar, Field vec) : s(std::move(scalar)), v(std::move(vec)) {
    if (!(s.grid() == v.grid())) throw DimensionError("pair components live on different grids");
    if (s.width() != 1) throw DimensionError("pair scalar part must have width 1");
}

FieldPair FieldPair::zeros(const PeriodicGrid& g, int n) {
    if (n < 1) throw DomainError("n must be >= 1");
    return {Field::imag(g), Field::vector(g, n - 1)};
}

FieldPair& FieldPair::operator+=(const FieldPair& o) {
    s += o.s;
    v += o.v;
    return *this;
}
FieldPair& FieldPair::operator-=(const FieldPair& o) {
    s -= o.s;
    v -= o.v;
    return *this;
}
FieldPair& FieldPair::operator*=(double a) {
    s *= a;
    v *= a;
    return *this;
}
FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
FieldPair operator*(double a, FieldPair b) { return b *= a; }

FieldPair deriv_x(const FieldPair& p, int order) { return {deriv_x(p.s, order), deriv_x(p.v, order)}; }

double pairing(const FieldPair& a, const FieldPair& b) { return pairing(a.s, b.s) + pairing(a.v, b.v); }

FieldPair equivalence_action(const Quat& a, const QMat& A, const FieldPair& p, double tol) {
    check_unit(a, tol);
    check_unitary(A, tol);
    const int m = p.v.width();
    if (A.rows() != m) throw DimensionError("unitary factor size must be n-1");
    FieldPair out = p;
    const Quat ai = conj(a);
    for (int i = 0; i < p.s.size(); ++i) {
        out.s(i) = a * p.s(i) * ai;
        for (int l = 0; l < m; ++l) {
            Quat t;
            for (int k = 0; k < m; ++k) t += a * p.v(i, k) * A(k, l);
            out.v(i, l) = t;
        }
    }
    return out;
}

StatePair random_state(const PeriodicGrid& g, int n, std::mt19937_64& rng, int modes, double amp) {
    std::normal_distribution<double> nd;
    StatePair st = FieldPair::zeros(g, n);
    const double w0 = 2.0 * M_PI / g.L;
    auto fill = [&](Field& f, bool imag) {
        for (int c = 0; c < f.width(); ++c)
            for (int k = 1; k <= modes; ++k) {
                double a[4], b[4];
                for (int r = 0; r < 4; ++r) {
                    a[r] = nd(rng) * amp / k;
                    b[r] = nd(rng) * amp / k;
                }
                if (imag) a[0] = b[0] = 0;
                for (int i = 0; i < g.N; ++i) {
                    const double cs = std::cos(k * w0 * g.x(i)), sn = std::sin(k * w0 * g.x(i));
                    f(i, c) += Quat{a[0] * cs + b[0] * sn, a[1] * cs + b[1] * sn, a[2] * cs + b[2] * sn,
                                    a[3] * cs + b[3] * sn};
                }
            }
    };
    fill(st.s, true);
    fill(st.v, false);
    return st;
}

StatePair localize(const StatePair& p, double center, double width) {
    StatePair out = p;
    for (int i = 0; i < p.s.size(); ++i) {
        const double z = (p.grid().x(i) - center) / width;
        const double e = std::exp(-z * z);
        out.s(i) *= e;
        for (int l = 0; l < p.v.width(); ++l) out.v(i, l) *= e;
    }
    return out;
}

}  // namespace hpn
