#include "hpn/biham.hpp"

#include <cmath>
#include <ostream>

#include "hpn/lie.hpp"
#include "hpn/pointwise.hpp"

namespace hpn {

namespace {

using namespace pw;

void require_pair(const StatePair& st, const FieldPair& p, const char* what) {
    if (!(st.grid() == p.grid())) throw DimensionError(std::string(what) + ": argument on a different grid");
    if (st.v.width() != p.v.width()) throw DimensionError(std::string(what) + ": vector length mismatch");
}

Field Dinv(const Field& f, const OpContext& ctx, const char* block) { return antideriv_x(f, ctx.dinv, block); }

// shorthand used by the explicit recursion blocks
struct Blocks {
    const StatePair& st;
    const OpContext& ctx;
    Field Cu(const Field& h) const { return comm(st.s, h); }
    Field Cb(const Field& v) const { return 0.5 * vcomm(st.v, v); }
    Field CM(const Field& v) const { return matcomm(st.v, v); }
    Field Au(const Field& h) const { return acomm(st.s, h); }
    Field Aur(const Field& r) const { return 2.0 * real_times(r, st.s); }
    Field Ab(const Field& v) const { return 0.5 * vacomm(st.v, v); }
    Field Rb(const Field& s) const { return lmul(s, st.v); }
    Field Lu(const Field& v) const { return lmul(st.s, v); }
    Field LM(const Field& M) const { return vmat(st.v, M); }
    Field I(const Field& f, const char* b) const { return Dinv(f, ctx, b); }
};

}  // namespace

FlowPair apply_H(const StatePair& st, const CovectorPair& w, const OpContext& ctx, AuxFields* aux) {
    require_pair(st, w, "apply_H");
    const Field& u = st.s;
    const Field& bu = st.v;
    const Field cb = vcomm(bu, w.v);
    Field wpar = -1.0 * Dinv(comm(u, w.s) - 0.5 * cb, ctx, "H: w_par");
    Field Wpar = Dinv(matcomm(bu, w.v), ctx, "H: W_par");
    Field r1 = deriv_x(w.s) + comm(u, wpar) + 0.5 * cb;
    Field r2 = deriv_x(w.v) - lmul(wpar, bu) + vmat(bu, Wpar) + lmul(w.s, bu) - lmul(u, w.v);
    r1.drop_real_part();
    if (aux) {
        aux->w_par = std::move(wpar);
        aux->W_par = std::move(Wpar);
    }
    return {std::move(r1), std::move(r2)};
}

CovectorPair apply_J(const StatePair& st, const FlowPair& h, const OpContext& ctx, AuxFields* aux) {
    require_pair(st, h, "apply_J");
    const Field& u = st.s;
    const Field& bu = st.v;
    Field hpar = -1.0 * Dinv(0.5 * acomm(u, h.s) - 0.5 * vacomm(bu, h.v), ctx, "J: h_par");
    Field r1 = 0.25 * deriv_x(h.s) + 0.25 * vcomm(bu, h.v) + real_times(hpar, u);
    Field r2 = deriv_x(h.v) + 0.5 * lmul(h.s, bu) + lmul(u, h.v) + lmul(hpar, bu);
    r1.drop_real_part();
    if (aux) aux->h_par = std::move(hpar);
    return {std::move(r1), std::move(r2)};
}

FieldPair apply_K(const StatePair& st, const FieldPair& z, KDomain dom, const OpContext& ctx) {
    require_pair(st, z, "apply_K");
    const int n = st.n(), N = st.s.size(), m = n - 1;
    const PeriodicGrid& g = st.grid();
    Field ps = Field::imag(g), pv = Field::vector(g, m);
    Field par_s = dom == KDomain::HPerp ? Field::imag(g) : Field::real(g);
    Field par_M = Field::matrix(g, m);
    std::vector<LieElement> U;
    U.reserve(N);
    for (int i = 0; i < N; ++i) {
        U.emplace_back(n, HPerp{st.s(i), st.v.vec_at(i)});
        const LieElement Z = dom == KDomain::HPerp ? LieElement(n, HPerp{z.s(i), z.v.vec_at(i)})
                                                   : LieElement(n, MPerp{z.s(i), z.v.vec_at(i)});
        const LieElement c = bracket(U.back(), Z);
        if (dom == KDomain::HPerp) {
            ps(i) = c.hperp.s;
            pv.set_vec(i, c.hperp.v);
            par_s(i) = c.hpar.p;
            par_M.set_mat(i, c.hpar.H);
        } else {
            ps(i) = c.mperp.s;
            pv.set_vec(i, c.mperp.v);
            par_s.re(i) = c.mpar.a;
        }
    }
    const Field P = Dinv(par_s, ctx, "K: parallel scalar");
    const Field M = dom == KDomain::HPerp ? Dinv(par_M, ctx, "K: parallel matrix") : par_M;
    FieldPair out{deriv_x(z.s) + ps, deriv_x(z.v) + pv};
    for (int i = 0; i < N; ++i) {
        const LieElement W = dom == KDomain::HPerp ? LieElement(n, HPar{P(i), M.mat_at(i)})
                                                   : LieElement(n, MPar{P.re(i)});
        const LieElement c = bracket(U[i], W);
        const Quat cs = dom == KDomain::HPerp ? c.hperp.s : c.mperp.s;
        const QVec& cv = dom == KDomain::HPerp ? c.hperp.v : c.mperp.v;
        out.s(i) -= cs;
        for (int l = 0; l < m; ++l) out.v(i, l) -= cv[l];
    }
    return out;
}

FlowPair H_via_K(const StatePair& st, const CovectorPair& w, const OpContext& ctx) {
    return apply_K(st, w, KDomain::HPerp, ctx);
}

CovectorPair J_via_K(const StatePair& st, const FlowPair& h, const OpContext& ctx) {
    // ad(e)^-1 : h_perp -> m_perp is (s, v) -> (s/2, -v); back again is (s, v) -> (-s/2, v)
    FieldPair z{0.5 * h.s, -1.0 * h.v};
    FieldPair k = apply_K(st, z, KDomain::MPerp, ctx);
    return {0.5 * k.s, -1.0 * k.v};
}

FlowPair apply_R(const StatePair& st, const FlowPair& h, const OpContext& ctx) {
    return apply_H(st, apply_J(st, h, ctx), ctx);
}

CovectorPair apply_R_adjoint(const StatePair& st, const CovectorPair& w, const OpContext& ctx) {
    return apply_J(st, apply_H(st, w, ctx), ctx);
}

FlowPair apply_R_explicit(const StatePair& st, const FlowPair& hp, const OpContext& ctx) {
    require_pair(st, hp, "apply_R_explicit");
    const Blocks b{st, ctx};
    const Field& h = hp.s;
    const Field& bh = hp.v;
    const Field hx = deriv_x(h), bhx = deriv_x(bh);
    const Field Iau = b.I(b.Au(h), "R: A_u h");
    const Field Iab = b.I(b.Ab(bh), "R: A_bu bh");
    const Field Rbh = b.Rb(h);
    const Field Lubh = b.Lu(bh);

    Field r11 = 0.25 * deriv_x(h, 2) + 0.5 * b.Cb(Rbh) - 0.25 * deriv_x(b.Aur(Iau)) -
                0.25 * b.Cu(b.I(b.Cu(hx), "R11: C_u h_x")) + 0.5 * b.Cu(b.I(b.Cb(Rbh), "R11: C_bu R h"));
    Field r12 = 0.5 * deriv_x(b.Cb(bh)) + b.Cb(bhx) + b.Cb(Lubh) + 0.5 * deriv_x(b.Aur(Iab)) +
                b.Cu(b.I(b.Cb(bhx), "R12: C_bu bh_x")) - 0.5 * b.Cu(b.I(b.Cu(b.Cb(bh)), "R12: C_u C_bu bh")) +
                b.Cu(b.I(b.Cb(Lubh), "R12: C_bu L_u bh"));
    Field r21 = 0.5 * deriv_x(Rbh) + 0.25 * b.Rb(hx) - 0.5 * b.Lu(Rbh) +
                0.25 * b.Rb(b.I(b.Cu(hx), "R21: C_u h_x")) - 0.5 * deriv_x(b.Rb(Iau)) -
                0.25 * b.Rb(b.Aur(Iau)) - 0.5 * b.Rb(b.I(b.Cb(Rbh), "R21: C_bu R h")) +
                0.5 * b.LM(b.I(b.CM(Rbh), "R21: bold C R h")) + 0.5 * b.Lu(b.Rb(Iau));
    Field r22 = deriv_x(bh, 2) + deriv_x(Lubh) - b.Lu(bhx) - b.Lu(Lubh) + 0.5 * b.Rb(b.Cb(bh)) +
                deriv_x(b.Rb(Iab)) - b.Rb(b.I(b.Cb(bhx), "R22: C_bu bh_x")) +
                b.LM(b.I(b.CM(bhx), "R22: bold C bh_x")) + 0.5 * b.Rb(b.I(b.Cu(b.Cb(bh)), "R22: C_u C_bu bh")) +
                0.5 * b.Rb(b.Aur(Iab)) - b.Rb(b.I(b.Cb(Lubh), "R22: C_bu L_u bh")) +
                b.LM(b.I(b.CM(Lubh), "R22: bold C L_u bh")) - b.Lu(b.Rb(Iab));
    Field s = r11 + r12;
    s.drop_real_part();
    return {std::move(s), r21 + r22};
}

Hierarchy::Hierarchy(StatePair st, OpContext ctx) : st_(std::move(st)), ctx_(ctx) {}

const FlowPair& Hierarchy::flow(int l) {
    if (l < 0) throw DomainError("hierarchy level must be >= 0");
    if (cache_.empty()) cache_.push_back(deriv_x(st_));
    while (static_cast<int>(cache_.size()) <= l) {
        const int lev = static_cast<int>(cache_.size());
        try {
            cache_.push_back(apply_R(st_, cache_.back(), ctx_));
        } catch (const NonlocalityError& e) {
            throw NonlocalityError("hierarchy level " + std::to_string(lev) + ", " + e.block, e.mean);
        }
    }
    return cache_[l];
}

FlowPair hierarchy_flow(const StatePair& st, int l, const OpContext& ctx) {
    Hierarchy h(st, ctx);
    return h.flow(l);
}

Field h_parallel(const StatePair& st, const FlowPair& h, const OpContext& ctx) {
    require_pair(st, h, "h_parallel");
    return -1.0 * Dinv(0.5 * acomm(st.s, h.s) - 0.5 * vacomm(st.v, h.v), ctx, "h_par");
}

std::pair<Field, Field> w_parallel(const StatePair& st, const CovectorPair& w, const OpContext& ctx) {
    require_pair(st, w, "w_parallel");
    Field wp = -1.0 * Dinv(comm(st.s, w.s) - 0.5 * vcomm(st.v, w.v), ctx, "w_par");
    Field Wp = Dinv(matcomm(st.v, w.v), ctx, "W_par");
    return {std::move(wp), std::move(Wp)};
}

Field hamiltonian_density(Hierarchy& hier, int l) {
    const StatePair& st = hier.state();
    const FlowPair& h = hier.flow(l);
    Field integrand = re_part(vinner(st.s, h.s)) + re_part(vinner(st.v, h.v));
    return (1.0 / (1 + 2 * l)) * Dinv(integrand, hier.context(), "Hamiltonian density");
}

Field hamiltonian_density(const StatePair& st, int l, const OpContext& ctx) {
    Hierarchy h(st, ctx);
    return hamiltonian_density(h, l);
}

Field H0_density(const StatePair& st) {
    return -0.5 * re_part(mul(st.s, st.s)) + 0.5 * norm2(st.v);
}

Field H0_density_alt(const StatePair& st) { return -0.5 * re_part(mul(st.s, st.s)) + norm2(st.v); }

Field H1_density(const StatePair& st) {
    const Field ux = deriv_x(st.s), bx = deriv_x(st.v);
    Field q = re_part(mul(st.s, st.s)) - norm2(st.v);
    Field q2 = q;
    for (int i = 0; i < q.size(); ++i) q2.re(i) = q.re(i) * q.re(i);
    return 0.125 * re_part(mul(ux, ux)) - 0.5 * norm2(bx) - 0.125 * acomm(st.s, vcomm(st.v, bx)) + 0.125 * q2;
}

CovectorPair variational_derivative_fd(const DensityFn& F, const StatePair& st, double eps) {
    const double h = eps * std::max(1.0, st.maxabs());
    const double dx = st.grid().dx();
    CovectorPair g = FieldPair::zeros(st.grid(), st.n());
    StatePair p = st;
    auto probe = [&](double& slot) {
        const double keep = slot;
        slot = keep + h;
        const double fp = integrate_real(F(p));
        slot = keep - h;
        const double fm = integrate_real(F(p));
        slot = keep;
        return (fp - fm) / (2 * h * dx);
    };
    for (int i = 0; i < st.s.size(); ++i) {
        g.s(i).i = probe(p.s(i).i);
        g.s(i).j = probe(p.s(i).j);
        g.s(i).k = probe(p.s(i).k);
        for (int l = 0; l < st.v.width(); ++l) {
            Quat& q = p.v(i, l);
            g.v(i, l) = {probe(q.re), probe(q.i), probe(q.j), probe(q.k)};
        }
    }
    return g;
}

double poisson_bracket(const StatePair& st, const CovectorPair& g1, const CovectorPair& g2, const OpContext& ctx) {
    return pairing(g1, apply_H(st, g2, ctx));
}

double poisson_bracket(const StatePair& st, const DensityFn& F1, const DensityFn& F2, const OpContext& ctx,
                       double eps) {
    return poisson_bracket(st, variational_derivative_fd(F1, st, eps), variational_derivative_fd(F2, st, eps), ctx);
}

double symplectic_pairing(const StatePair& st, const FlowPair& X1, const FlowPair& X2, const OpContext& ctx) {
    return pairing(X1, apply_J(st, X2, ctx));
}

double symplectic_closure_residual(const StatePair& st, const FlowPair& X1, const FlowPair& X2,
                                   const FlowPair& X3, const OpContext& ctx, double eps) {
    auto dir = [&](const FlowPair& d, const FlowPair& a, const FlowPair& b) {
        const double wp = symplectic_pairing(st + eps * d, a, b, ctx);
        const double wm = symplectic_pairing(st - eps * d, a, b, ctx);
        return (wp - wm) / (2 * eps);
    };
    return dir(X1, X2, X3) + dir(X2, X3, X1) + dir(X3, X1, X2);
}

void write_operator_dump_csv(std::ostream& os, const FieldPair& in, const FieldPair& out) {
    os << "x";
    auto head = [&](const char* tag, const FieldPair& p) {
        for (int c = 0; c < 1 + p.v.width(); ++c)
            for (const char* q : {"re", "i", "j", "k"}) os << ',' << tag << c << '_' << q;
    };
    head("in", in);
    head("out", out);
    os << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17e", v);
        os << ',' << buf;
    };
    auto row = [&](const FieldPair& p, int i) {
        for (double v : {p.s(i).re, p.s(i).i, p.s(i).j, p.s(i).k}) put(v);
        for (int l = 0; l < p.v.width(); ++l)
            for (double v : {p.v(i, l).re, p.v(i, l).i, p.v(i, l).j, p.v(i, l).k}) put(v);
    };
    for (int i = 0; i < in.s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17e", in.grid().x(i));
        os << buf;
        row(in, i);
        row(out, i);
        os << '\n';
    }
}

}  // namespace hpn
