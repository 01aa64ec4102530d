#include "hpn/geometry.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace hpn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// sum conj(a_k) b_k: the projective-invariant pairing of column vectors
Quat col_inner(const QVec& a, const QVec& b) {
    Quat s;
    for (size_t k = 0; k < a.size(); ++k) s += conj(a[k]) * b[k];
    return s;
}

double vnorm2(const QVec& v) {
    double s = 0;
    for (const auto& q : v) s += norm2(q);
    return s;
}

QVec axpy(const QVec& a, double s, const QVec& b) {
    QVec r = a;
    for (size_t k = 0; k < r.size(); ++k) r[k] += s * b[k];
    return r;
}

// 6th-order central first derivative at index k of a sampled vector curve
QVec d1(const std::vector<QVec>& f, size_t k, double h) {
    static constexpr double w[3] = {3.0 / 4, -3.0 / 20, 1.0 / 60};
    QVec r(f[k].size());
    for (int s = 1; s <= 3; ++s)
        for (size_t c = 0; c < r.size(); ++c) r[c] += w[s - 1] * (f[k + s][c] - f[k - s][c]);
    for (auto& q : r) q = q / h;
    return r;
}

// nabla V = hor(V') - V (gamma^* gamma')
QVec covariant(const QVec& gamma, const QVec& dgamma, const QVec& V, const QVec& dV) {
    QVec r = horizontal(gamma, dV);
    const Quat conn = col_inner(gamma, dgamma);
    for (size_t c = 0; c < r.size(); ++c) r[c] -= V[c] * conn;
    return r;
}

QMat generator(int n, double ecoef, const Quat& u, const Quat* bu) {
    QMat M(n + 1, n + 1);
    M(0, 1) = Quat(ecoef);
    M(1, 0) = Quat(-ecoef);
    M(0, 0) = u;
    M(1, 1) = -u;
    for (int l = 0; l < n - 1; ++l) {
        M(1, 2 + l) = bu[l];
        M(2 + l, 1) = -conj(bu[l]);
    }
    return M;
}

// stencil weights for a centred first time derivative over K samples
std::vector<double> time_weights(size_t K) {
    if (K == 3) return {-0.5, 0.0, 0.5};
    if (K == 5) return {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    throw DimensionError("time differencing needs 3 or 5 states");
}

void require_quiet_edge(const StatePair& st, double tol) {
    double e = hpn::maxabs(st.s(0));
    for (int l = 0; l < st.v.width(); ++l) e = std::max(e, hpn::maxabs(st.v(0, l)));
    if (e > tol * std::max(1.0, st.maxabs()))
        throw AlignmentError("state does not vanish at x = 0; frames at different times cannot be aligned");
}

}  // namespace

double unitarity_defect(const QMat& psi) { return maxabs(psi * adjoint(psi) - QMat::identity(psi.rows())); }

FrameState transport_frame(const StatePair& st, const TransportOptions& opt) {
    if (opt.substeps < 1) throw DomainError("substeps must be >= 1");
    const int n = st.n(), N = st.s.size(), m = opt.substeps;
    const double ecoef = opt.include_e ? 1.0 / std::sqrt(chi(n)) : 0.0;
    const double h = st.grid().dx() / m;
    const double c[2] = {0.5 - std::sqrt(3.0) / 6, 0.5 + std::sqrt(3.0) / 6};
    std::vector<Field> su, sv;
    for (int s = 0; s < m; ++s)
        for (double cc : c) {
            su.push_back(shift(st.s, (s + cc) * h));
            sv.push_back(shift(st.v, (s + cc) * h));
        }
    QMat psi0 = opt.psi0 ? *opt.psi0 : QMat::identity(n + 1);
    if (psi0.rows() != n + 1 || psi0.cols() != n + 1) throw DimensionError("initial frame has the wrong size");
    FrameState fr;
    fr.grid = st.grid();
    fr.n = n;
    fr.substeps = m;
    fr.psi.reserve(N);
    if (opt.keep_fine) fr.fine.reserve(static_cast<size_t>(N) * m + 1);
    CMat Y = embed(psi0);
    const double k2 = std::sqrt(3.0) * h * h / 12;
    for (int j = 0; j < N; ++j) {
        fr.psi.push_back(unembed(Y));
        for (int s = 0; s < m; ++s) {
            if (opt.keep_fine) fr.fine.push_back(unembed(Y));
            const Field &u1 = su[2 * s], &u2 = su[2 * s + 1];
            const Field &v1 = sv[2 * s], &v2 = sv[2 * s + 1];
            const int w = v1.width();
            const CMat A1 = embed(generator(n, ecoef, u1(j), w ? &v1(j, 0) : nullptr));
            const CMat A2 = embed(generator(n, ecoef, u2(j), w ? &v2(j, 0) : nullptr));
            CMat Om = (h / 2) * (A1 + A2) + k2 * (A1 * A2 - A2 * A1);
            Om = 0.5 * (Om - Om.adjoint());
            Y = Y * expm_skew(Om);
        }
    }
    fr.end = unembed(Y);
    if (opt.keep_fine) fr.fine.push_back(fr.end);
    double def = unitarity_defect(fr.end);
    for (const auto& p : fr.psi) def = std::max(def, unitarity_defect(p));
    fr.unitarity_defect = def;
    if (def > opt.unitarity_tol)
        throw IntegrationAccuracyError("frame lost unitarity: defect " + std::to_string(def));
    return fr;
}

QVec column0(const QMat& psi) {
    QVec g(psi.rows());
    for (int i = 0; i < psi.rows(); ++i) g[i] = psi(i, 0);
    return g;
}

QVec gauge_fix(const QVec& g, double tol) {
    for (const auto& q : g) {
        const double a = abs(q);
        if (a > tol) {
            const Quat ph = conj(q) / a;
            QVec r = g;
            for (auto& x : r) x = x * ph;
            return r;
        }
    }
    return g;
}

CurveSample reconstruct_curve(const FrameState& frame) {
    CurveSample c;
    c.n = frame.n;
    c.gamma.reserve(frame.psi.size());
    for (const auto& p : frame.psi) c.gamma.push_back(gauge_fix(column0(p)));
    return c;
}

QVec horizontal(const QVec& gamma, const QVec& V) {
    const Quat a = col_inner(gamma, V);
    QVec r = V;
    for (size_t k = 0; k < r.size(); ++k) r[k] -= gamma[k] * a;
    return r;
}

GeometricInvariants geometric_invariants(const StatePair& st) {
    const PeriodicGrid& g = st.grid();
    GeometricInvariants gi{Field::real(g), Field::real(g), Field::real(g)};
    const Field ux = deriv_x(st.s), bx = deriv_x(st.v);
    const int m = st.v.width();
    for (int i = 0; i < g.N; ++i) {
        const double u2 = norm2(st.s(i));
        double b2 = 0, bbx = 0, bx2 = 0;
        Quat ubbx;
        for (int l = 0; l < m; ++l) {
            b2 += norm2(st.v(i, l));
            bbx += (st.v(i, l) * conj(bx(i, l))).re;
            bx2 += norm2(bx(i, l));
            ubbx += st.s(i) * st.v(i, l) * conj(bx(i, l));
        }
        const double nn = 4 * u2 + b2;
        gi.gNN.re(i) = nn;
        gi.gNNx.re(i) = 4 * (st.s(i) * conj(ux(i))).re + bbx;
        gi.gNxNx.re(i) = 4 * norm2(ux(i)) + bx2 + nn * nn + 9 * u2 * b2 + 6 * ubbx.re;
    }
    return gi;
}

namespace {

struct FineCurve {
    std::vector<QVec> g, dg, T, N, dN;
};

FineCurve fine_curve(const FrameState& fr) {
    if (fr.fine.empty()) throw DomainError("curve evaluation needs a frame with substep samples");
    const double h = fr.grid.dx() / fr.substeps;
    const size_t K = fr.fine.size();
    FineCurve c;
    c.g.reserve(K);
    for (const auto& p : fr.fine) c.g.push_back(column0(p));
    const QVec zero(fr.n + 1);
    c.dg.assign(K, zero);
    c.T.assign(K, zero);
    c.N.assign(K, zero);
    c.dN.assign(K, zero);
    for (size_t k = 3; k + 3 < K; ++k) {
        c.dg[k] = d1(c.g, k, h);
        c.T[k] = horizontal(c.g[k], c.dg[k]);
    }
    for (size_t k = 6; k + 6 < K; ++k) c.N[k] = covariant(c.g[k], c.dg[k], c.T[k], d1(c.T, k, h));
    for (size_t k = 9; k + 9 < K; ++k) c.dN[k] = covariant(c.g[k], c.dg[k], c.N[k], d1(c.N, k, h));
    return c;
}

}  // namespace

GeometricInvariants curve_invariants(const FrameState& fr, int margin) {
    const FineCurve c = fine_curve(fr);
    const double X = chi(fr.n);
    GeometricInvariants gi{Field::real(fr.grid), Field::real(fr.grid), Field::real(fr.grid)};
    const int N = fr.grid.N, m = fr.substeps;
    const size_t K = fr.fine.size();
    for (int i = 0; i < N; ++i) {
        const size_t k = static_cast<size_t>(i) * m;
        if (i < margin || i >= N - margin || k < 9 || k + 9 >= K) {
            gi.gNN.re(i) = gi.gNNx.re(i) = gi.gNxNx.re(i) = kNaN;
            continue;
        }
        gi.gNN.re(i) = X * vnorm2(c.N[k]);
        gi.gNNx.re(i) = X * col_inner(c.N[k], c.dN[k]).re;
        gi.gNxNx.re(i) = X * vnorm2(c.dN[k]);
    }
    return gi;
}

std::vector<double> curve_speed(const FrameState& fr, int margin) {
    const FineCurve c = fine_curve(fr);
    const double X = chi(fr.n);
    const int N = fr.grid.N, m = fr.substeps;
    std::vector<double> s(N, kNaN);
    for (int i = margin; i < N - margin; ++i) {
        const size_t k = static_cast<size_t>(i) * m;
        if (k >= 3 && k + 3 < fr.fine.size()) s[i] = std::sqrt(X * vnorm2(c.T[k]));
    }
    return s;
}

MapReport verify_mkdv_map(const std::vector<StatePair>& states, double dt, int substeps, double edge_tol) {
    const auto w = time_weights(states.size());
    const size_t mid = states.size() / 2;
    const StatePair& st = states[mid];
    const int n = st.n(), N = st.s.size(), m = n - 1;
    for (const auto& s : states) {
        if (!(s.grid() == st.grid()) || s.n() != n) throw AlignmentError("trajectory states do not share a grid");
        require_quiet_edge(s, edge_tol);
    }
    TransportOptions topt;
    topt.substeps = substeps;
    std::vector<FrameState> fr;
    for (const auto& s : states) fr.push_back(transport_frame(s, topt));

    const double X = chi(n);
    const LieElement Ex(n, MPar{1.0 / std::sqrt(X)});
    auto Xinv = [&](const LieElement& M) {
        return LieElement(n, MPerp{M.mperp.s * (X / 4), X * M.mperp.v});
    };
    const Field ux = deriv_x(st.s), bx = deriv_x(st.v);
    MapReport r;
    for (int j = 0; j < N; ++j) {
        QVec gt(n + 1);
        for (size_t k = 0; k < states.size(); ++k) {
            if (w[k] == 0) continue;
            const QVec g = column0(fr[k].psi[j]);
            for (int c = 0; c <= n; ++c) gt[c] += (w[k] / dt) * g[c];
        }
        const QMat& P = fr[mid].psi[j];
        QVec b(n);
        for (int i = 1; i <= n; ++i) {
            Quat ci;
            for (int k = 0; k <= n; ++k) ci += conj(P(k, i)) * gt[k];
            b[i - 1] = -conj(ci);
        }
        const LieElement W(n, HPerp{st.s(j), st.v.vec_at(j)});
        const LieElement Wx(n, HPerp{ux(j), bx.vec_at(j)});
        const LieElement eN = bracket(W, Ex);
        const LieElement eNx = bracket(Wx, Ex);
        const LieElement eNp = eNx + bracket(W, eN);
        const LieElement ad2 = bracket(eN, bracket(eN, Ex));
        const LieElement t1 = Xinv((1.0 / X) * eNp - 0.5 * ad2);
        const double gco = -killing(Xinv(eN), eN);
        const double tang = 0.5 / X * gco / std::sqrt(X);

        const double rs = hpn::maxabs(im(b[0]) - t1.mperp.s);
        double rv = 0;
        for (int l = 0; l < m; ++l) rv = std::max(rv, hpn::maxabs(b[1 + l] - t1.mperp.v[l]));
        r.residual_perp_scalar = std::max(r.residual_perp_scalar, rs);
        r.residual_perp_vector = std::max(r.residual_perp_vector, rv);
        r.residual_tangential = std::max(r.residual_tangential, std::fabs(b[0].re - tang));
        r.residual_opposite_sign =
            std::max(r.residual_opposite_sign, std::max({std::fabs(b[0].re + tang), rs, rv}));
        r.scale = std::max({r.scale, std::fabs(tang), t1.norm_inf()});

        // literal alternative: chi^-1 (Y_x - A_perp - 3 A_par), Y = X^-1 N, A = [Y,[Y,e_x]]
        const LieElement Y = Xinv(eN);
        const LieElement Yx = Xinv(eNx) + bracket(W, Y);
        const LieElement A = bracket(Y, bracket(Y, Ex));
        LieElement tot = Yx - A - 2.0 * A.project(Subspace::MPar);
        tot *= 1.0 / X;
        double rh = std::fabs(b[0].re - tot.mpar.a);
        rh = std::max(rh, hpn::maxabs(im(b[0]) - tot.mperp.s));
        for (int l = 0; l < m; ++l) rh = std::max(rh, hpn::maxabs(b[1 + l] - tot.mperp.v[l]));
        r.residual_gamma_t_h = std::max(r.residual_gamma_t_h, rh);
        ++r.points;
    }
    r.residual = std::max({r.residual_tangential, r.residual_perp_scalar, r.residual_perp_vector});
    return r;
}

WaveReport verify_wave_map(const std::vector<StatePair>& states, double t_mid, double dt,
                           const std::vector<LieElement>& e_t, double c, int substeps, double edge_tol) {
    const auto w = time_weights(states.size());
    const size_t mid = states.size() / 2;
    const StatePair& st = states[mid];
    const int n = st.n(), N = st.s.size();
    if (static_cast<int>(e_t.size()) != N) throw DimensionError("e_t must hold one element per grid point");
    for (const auto& s : states) {
        if (!(s.grid() == st.grid()) || s.n() != n) throw AlignmentError("trajectory states do not share a grid");
        require_quiet_edge(s, edge_tol);
    }
    const QMat E0 = e_t[0].matrix();
    std::vector<FrameState> fr;
    for (size_t k = 0; k < states.size(); ++k) {
        TransportOptions topt;
        topt.substeps = substeps;
        topt.keep_fine = true;
        const double tk = t_mid + (static_cast<double>(k) - static_cast<double>(mid)) * dt;
        topt.psi0 = expm(tk * E0);
        fr.push_back(transport_frame(states[k], topt));
    }
    const double X = chi(n);
    const double sc = std::sqrt(c);
    const double et_scale = sc / std::sqrt(X);
    WaveReport r;
    // frame-level check at grid points
    for (int j = 0; j < N; ++j) {
        QMat Pt(n + 1, n + 1);
        for (size_t k = 0; k < states.size(); ++k)
            if (w[k] != 0) Pt += (w[k] / dt) * fr[k].psi[j];
        QMat G = adjoint(fr[mid].psi[j]) * Pt;
        G = 0.5 * (G - adjoint(G));
        const LieElement g = LieElement::from_matrix(G);
        const double ht = std::max(g.project(Subspace::HPar).norm_inf(), g.project(Subspace::HPerp).norm_inf());
        LieElement mp = g.project(Subspace::MPar) + g.project(Subspace::MPerp);
        mp -= e_t[j];
        r.omega_t = std::max(r.omega_t, ht / et_scale);
        r.e_t = std::max(r.e_t, mp.norm_inf() / et_scale);
    }
    // curve-level check on the substep grid
    const size_t K = fr[mid].fine.size();
    const double h = st.grid().dx() / substeps;
    std::vector<QVec> g(K), dg(K), V(K);
    for (size_t k = 0; k < K; ++k) {
        g[k] = column0(fr[mid].fine[k]);
        QVec gt(n + 1);
        for (size_t s = 0; s < states.size(); ++s)
            if (w[s] != 0) gt = axpy(gt, w[s] / dt, column0(fr[s].fine[k]));
        V[k] = horizontal(g[k], gt);
    }
    for (size_t k = 3; k + 3 < K; ++k) {
        dg[k] = d1(g, k, h);
        const QVec nv = covariant(g[k], dg[k], V[k], d1(V, k, h));
        r.nabla_gamma_t = std::max(r.nabla_gamma_t, std::sqrt(X * vnorm2(nv)) / sc);
        r.speed_spread = std::max(r.speed_spread, std::fabs(std::sqrt(X * vnorm2(V[k])) / sc - 1.0));
        ++r.points;
    }
    r.residual = std::max({r.omega_t, r.e_t, r.nabla_gamma_t, r.speed_spread});
    return r;
}

void write_curve_csv(std::ostream& os, const CurveSample& c, const PeriodicGrid& g) {
    os << "x";
    for (int k = 0; k <= c.n; ++k)
        for (const char* p : {"re", "i", "j", "k"}) os << ",g" << k << '_' << p;
    os << '\n';
    char buf[32];
    for (size_t i = 0; i < c.gamma.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17e", g.x(static_cast<int>(i)));
        os << buf;
        for (const auto& q : c.gamma[i])
            for (double v : {q.re, q.i, q.j, q.k}) {
                std::snprintf(buf, sizeof buf, "%.17e", v);
                os << ',' << buf;
            }
        os << '\n';
    }
}

void write_chordal_csv(std::ostream& os, const CurveSample& c) {
    char buf[32];
    for (size_t i = 0; i < c.gamma.size(); ++i) {
        for (size_t j = 0; j < c.gamma.size(); ++j) {
            const double a = std::min(1.0, norm2(col_inner(c.gamma[i], c.gamma[j])));
            std::snprintf(buf, sizeof buf, "%.17e", std::sqrt(1.0 - a));
            os << (j ? "," : "") << buf;
        }
        os << '\n';
    }
}

}  // namespace hpn
