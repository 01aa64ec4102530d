#include "hpn/lie.hpp"

#include <algorithm>
#include <string>

namespace hpn {

namespace {

QVec zeros(int m) { return QVec(static_cast<size_t>(std::max(m, 0))); }

void require_len(const QVec& v, int n, const char* what) {
    if (static_cast<int>(v.size()) != n - 1)
        throw DimensionError(std::string(what) + ": vector length " + std::to_string(v.size()) +
                             " does not match n-1 = " + std::to_string(n - 1));
}

void require_same_n(const LieElement& a, const LieElement& b) {
    if (a.n() != b.n()) throw DimensionError("Lie elements of different dimension");
}

}  // namespace

const char* to_string(Subspace s) {
    switch (s) {
        case Subspace::MPar: return "m_par";
        case Subspace::MPerp: return "m_perp";
        case Subspace::HPar: return "h_par";
        case Subspace::HPerp: return "h_perp";
    }
    return "?";
}

LieElement::LieElement(int n) : n_(n) {
    if (n < 1) throw DomainError("n must be >= 1");
    mperp.v = zeros(n - 1);
    hperp.v = zeros(n - 1);
    hpar.H = QMat(n - 1, n - 1);
}
LieElement::LieElement(int n, const MPar& x) : LieElement(n) { mpar = x; }
LieElement::LieElement(int n, const MPerp& x) : LieElement(n) {
    require_len(x.v, n, "m_perp");
    mperp = x;
}
LieElement::LieElement(int n, const HPar& x) : LieElement(n) {
    if (x.H.rows() != n - 1 || x.H.cols() != n - 1) throw DimensionError("h_par block has wrong size");
    hpar = x;
}
LieElement::LieElement(int n, const HPerp& x) : LieElement(n) {
    require_len(x.v, n, "h_perp");
    hperp = x;
}

LieElement LieElement::from_matrix(const QMat& m, double tol) {
    const int N = m.rows();
    if (N < 2 || m.cols() != N) throw DimensionError("Lie element matrix must be square of size >= 2");
    if (antihermitian_defect(m) > tol * std::max(1.0, maxabs(m)))
        throw DomainError("matrix is not anti-Hermitian");
    LieElement g(N - 1);
    g.mpar.a = 0.5 * (m(0, 1) - m(1, 0)).re;
    g.mperp.s = im(0.5 * (m(0, 1) + m(1, 0)));
    g.hpar.p = 0.5 * (m(0, 0) + m(1, 1));
    g.hperp.s = 0.5 * (m(0, 0) - m(1, 1));
    for (int l = 0; l < N - 2; ++l) {
        g.mperp.v[l] = m(0, 2 + l);
        g.hperp.v[l] = m(1, 2 + l);
        for (int c = 0; c < N - 2; ++c) g.hpar.H(l, c) = m(2 + l, 2 + c);
    }
    return g;
}

QMat LieElement::matrix() const {
    const int N = n_ + 1;
    QMat m(N, N);
    m(0, 1) = Quat(mpar.a) + mperp.s;
    m(1, 0) = Quat(-mpar.a) + mperp.s;
    m(0, 0) = hpar.p + hperp.s;
    m(1, 1) = hpar.p - hperp.s;
    for (int l = 0; l < N - 2; ++l) {
        m(0, 2 + l) = mperp.v[l];
        m(2 + l, 0) = -conj(mperp.v[l]);
        m(1, 2 + l) = hperp.v[l];
        m(2 + l, 1) = -conj(hperp.v[l]);
        for (int c = 0; c < N - 2; ++c) m(2 + l, 2 + c) = hpar.H(l, c);
    }
    return m;
}

LieElement LieElement::project(Subspace s) const {
    switch (s) {
        case Subspace::MPar: return LieElement(n_, mpar);
        case Subspace::MPerp: return LieElement(n_, mperp);
        case Subspace::HPar: return LieElement(n_, hpar);
        case Subspace::HPerp: return LieElement(n_, hperp);
    }
    return LieElement(n_);
}

double LieElement::norm_inf() const {
    return std::max({std::fabs(mpar.a), maxabs(mperp.s), maxabs(mperp.v), maxabs(hpar.p), maxabs(hpar.H),
                     maxabs(hperp.s), maxabs(hperp.v)});
}

double LieElement::outside(Subspace s) const {
    LieElement r = *this;
    r -= project(s);
    return r.norm_inf();
}

LieElement& LieElement::operator+=(const LieElement& o) {
    require_same_n(*this, o);
    mpar.a += o.mpar.a;
    mperp.s += o.mperp.s;
    mperp.v = mperp.v + o.mperp.v;
    hpar.p += o.hpar.p;
    hpar.H += o.hpar.H;
    hperp.s += o.hperp.s;
    hperp.v = hperp.v + o.hperp.v;
    return *this;
}
LieElement& LieElement::operator-=(const LieElement& o) {
    LieElement t = o;
    t *= -1.0;
    return *this += t;
}
LieElement& LieElement::operator*=(double s) {
    mpar.a *= s;
    mperp.s *= s;
    mperp.v = s * mperp.v;
    hpar.p *= s;
    hpar.H *= s;
    hperp.s *= s;
    hperp.v = s * hperp.v;
    return *this;
}
LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
LieElement operator*(double s, LieElement a) { return a *= s; }

LieElement cartan_e(int n) { return LieElement(n, MPar{1.0}); }

LieElement bracket(const LieElement& g1, const LieElement& g2) {
    require_same_n(g1, g2);
    const QMat a = g1.matrix(), b = g2.matrix();
    return LieElement::from_matrix(a * b - b * a, 1e-8);
}

// ---- closed forms ----

HPar bracket(const MPar&, const MPar&) { return {}; }
MPar bracket(const MPar&, const HPar&) { return {}; }

HPar bracket(const HPar& a, const HPar& b) {
    if (a.H.rows() != b.H.rows()) throw DimensionError("h_par blocks differ in size");
    return {comm_C(a.p, b.p), a.H * b.H - b.H * a.H};
}

HPerp bracket(const MPar& a, const MPerp& b) { return {2.0 * a.a * b.s, -a.a * b.v}; }
MPerp bracket(const MPar& a, const HPerp& b) { return {-2.0 * a.a * b.s, a.a * b.v}; }

MPerp bracket(const HPar& a, const MPerp& b) {
    return {comm_C(a.p, b.s), lmul(a.p, b.v) - vmat(b.v, a.H)};
}
HPerp bracket(const HPar& a, const HPerp& b) {
    return {comm_C(a.p, b.s), lmul(a.p, b.v) - vmat(b.v, a.H)};
}

HPar bracket_hpar(const MPerp& a, const MPerp& b) {
    return {comm_C(a.s, b.s) + 0.5 * comm_C(b.v, a.v), matcomm_C(b.v, a.v)};
}
HPerp bracket_hperp(const MPerp& a, const MPerp& b) {
    return {0.5 * comm_C(b.v, a.v), lmul(a.s, b.v) - lmul(b.s, a.v)};
}
HPar bracket_hpar(const HPerp& a, const HPerp& b) {
    return {comm_C(a.s, b.s) + 0.5 * comm_C(b.v, a.v), matcomm_C(b.v, a.v)};
}
HPerp bracket_hperp(const HPerp& a, const HPerp& b) {
    return {0.5 * comm_C(a.v, b.v), lmul(b.s, a.v) - lmul(a.s, b.v)};
}
MPar bracket_mpar(const MPerp& a, const HPerp& b) {
    return {-acomm_re(a.s, b.s) - 0.5 * acomm_A(a.v, b.v)};
}
MPerp bracket_mperp(const MPerp& a, const HPerp& b) {
    return {0.5 * comm_C(b.v, a.v), lmul(a.s, b.v) - lmul(b.s, a.v)};
}

LieElement bracket_projected(const LieElement& g1, Subspace s1, const LieElement& g2, Subspace s2,
                             Subspace target, double tol) {
    require_same_n(g1, g2);
    const double scale = std::max({1.0, g1.norm_inf(), g2.norm_inf()});
    if (g1.outside(s1) > tol * scale || g2.outside(s2) > tol * scale)
        throw DomainError(std::string("arguments do not lie in ") + to_string(s1) + " x " + to_string(s2));
    const int n = g1.n();
    using S = Subspace;
    // order so that the pair matches a table entry; [b,a] = -[a,b]
    auto rank = [](S s) {
        switch (s) {
            case S::MPar: return 0;
            case S::HPar: return 1;
            case S::MPerp: return 2;
            case S::HPerp: return 3;
        }
        return 0;
    };
    if (rank(s2) < rank(s1)) {
        LieElement r = bracket_projected(g2, s2, g1, s1, target, tol);
        r *= -1.0;
        return r;
    }
    LieElement out(n);
    const auto& a = g1;
    const auto& b = g2;
    if (s1 == S::MPar && s2 == S::MPar) {
        if (target == S::HPar) out = LieElement(n, HPar{bracket(a.mpar, b.mpar).p, QMat(n - 1, n - 1)});
    } else if (s1 == S::MPar && s2 == S::HPar) {
        if (target == S::MPar) out = LieElement(n, bracket(a.mpar, b.hpar));
    } else if (s1 == S::HPar && s2 == S::HPar) {
        if (target == S::HPar) out = LieElement(n, bracket(a.hpar, b.hpar));
    } else if (s1 == S::MPar && s2 == S::MPerp) {
        if (target == S::HPerp) out = LieElement(n, bracket(a.mpar, b.mperp));
    } else if (s1 == S::MPar && s2 == S::HPerp) {
        if (target == S::MPerp) out = LieElement(n, bracket(a.mpar, b.hperp));
    } else if (s1 == S::HPar && s2 == S::MPerp) {
        if (target == S::MPerp) out = LieElement(n, bracket(a.hpar, b.mperp));
    } else if (s1 == S::HPar && s2 == S::HPerp) {
        if (target == S::HPerp) out = LieElement(n, bracket(a.hpar, b.hperp));
    } else if (s1 == S::MPerp && s2 == S::MPerp) {
        if (target == S::HPar) out = LieElement(n, bracket_hpar(a.mperp, b.mperp));
        if (target == S::HPerp) out = LieElement(n, bracket_hperp(a.mperp, b.mperp));
    } else if (s1 == S::HPerp && s2 == S::HPerp) {
        if (target == S::HPar) out = LieElement(n, bracket_hpar(a.hperp, b.hperp));
        if (target == S::HPerp) out = LieElement(n, bracket_hperp(a.hperp, b.hperp));
    } else if (s1 == S::MPerp && s2 == S::HPerp) {
        if (target == S::MPar) out = LieElement(n, bracket_mpar(a.mperp, b.hperp));
        if (target == S::MPerp) out = LieElement(n, bracket_mperp(a.mperp, b.hperp));
    }
    return out;
}

// ---- Killing form ----

double killing(const LieElement& g1, const LieElement& g2) {
    require_same_n(g1, g2);
    const QMat a = g1.matrix(), b = g2.matrix();
    double t = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t += (a(i, j) * b(j, i)).re;
    return 4.0 * (g1.n() + 2) * t;
}

double killing_components(const LieElement& g1, const LieElement& g2) {
    require_same_n(g1, g2);
    const int N = g1.n() + 1;
    auto quad = [N](const LieElement& g) {
        const CMat c = embed(g.matrix());
        const CMat A = c.topLeftCorner(N, N), B = c.topRightCorner(N, N);
        return -4.0 * (N + 1) * ((A * A.adjoint()).trace() + (B * B.adjoint()).trace()).real();
    };
    return 0.25 * (quad(g1 + g2) - quad(g1 - g2));
}

double killing_trace_ad(const LieElement& g1, const LieElement& g2) {
    require_same_n(g1, g2);
    const auto basis = basis_g(g1.n());
    double t = 0;
    for (const auto& b : basis) {
        const QMat x = bracket(g1, bracket(g2, b)).matrix();
        const QMat bm = b.matrix();
        double num = 0, den = 0;
        for (int i = 0; i < bm.rows(); ++i)
            for (int j = 0; j < bm.cols(); ++j) {
                num += (x(i, j) * conj(bm(i, j))).re;
                den += norm2(bm(i, j));
            }
        t += num / den;
    }
    return t;
}

double killing_m(const MPar& a1, const MPerp& p1, const MPar& a2, const MPerp& p2, int n) {
    const Quat m1 = Quat(a1.a) + p1.s, m2 = Quat(a2.a) + p2.s;
    return -chi(n) * ((m1 * conj(m2)).re + hermitian_inner(p1.v, p2.v).re);
}

double killing_h(const HPerp& a, const HPerp& b, int n) {
    return chi(n) * ((a.s * b.s).re - hermitian_inner(a.v, b.v).re);
}

// ---- ad(e) ----

MPerp ad_e(const HPerp& x) { return {-2.0 * x.s, x.v}; }
HPerp ad_e(const MPerp& x) { return {2.0 * x.s, -1.0 * x.v}; }
MPerp ad_e_inv(const HPerp& y) { return {0.5 * y.s, -1.0 * y.v}; }
HPerp ad_e_inv(const MPerp& y) { return {-0.5 * y.s, y.v}; }

// ---- equivalence group ----

void check_unit(const Quat& a, double tol) {
    if (std::fabs(norm2(a) - 1.0) > tol) throw DomainError("equivalence action needs a unit quaternion");
}

void check_unitary(const QMat& A, double tol) {
    if (A.rows() != A.cols()) throw DimensionError("unitary factor must be square");
    if (A.rows() == 0) return;
    if (maxabs(A * adjoint(A) - QMat::identity(A.rows())) > tol)
        throw DomainError("equivalence action needs a unitary quaternion matrix");
}

HPerp equivalence_action(const Quat& a, const QMat& A, const HPerp& x, double tol) {
    check_unit(a, tol);
    check_unitary(A, tol);
    if (A.rows() != static_cast<int>(x.v.size())) throw DimensionError("unitary factor size must be n-1");
    return {a * x.s * conj(a), vmat(lmul(a, x.v), A)};
}

LieElement adjoint_action(const Quat& a, const QMat& A, const LieElement& g, double tol) {
    check_unit(a, tol);
    check_unitary(A, tol);
    const int N = g.n() + 1;
    if (A.rows() != N - 2) throw DimensionError("unitary factor size must be n-1");
    QMat h(N, N);
    h(0, 0) = a;
    h(1, 1) = a;
    for (int i = 0; i < N - 2; ++i)
        for (int j = 0; j < N - 2; ++j) h(2 + i, 2 + j) = A(i, j);
    return LieElement::from_matrix(h * g.matrix() * adjoint(h), 1e-8);
}

// ---- bases ----

std::vector<LieElement> basis_m(int n) {
    if (n < 1) throw DomainError("basis_m needs n >= 1");
    std::vector<LieElement> b;
    b.push_back(cartan_e(n));
    for (const Quat& q : {kI, kJ, kK}) b.emplace_back(n, MPerp{q, QVec(n - 1)});
    for (int l = 0; l < n - 1; ++l)
        for (const Quat& q : {kOne, kI, kJ, kK}) {
            QVec v(n - 1);
            v[l] = q;
            b.emplace_back(n, MPerp{{}, v});
        }
    return b;
}

std::vector<LieElement> basis_g(int n) {
    if (n < 1) throw DomainError("basis_g needs n >= 1");
    const int N = n + 1;
    std::vector<LieElement> b;
    for (int d = 0; d < N; ++d)
        for (const Quat& q : {kI, kJ, kK}) {
            QMat m(N, N);
            m(d, d) = q;
            b.push_back(LieElement::from_matrix(m));
        }
    for (int r = 0; r < N; ++r)
        for (int c = r + 1; c < N; ++c)
            for (const Quat& q : {kOne, kI, kJ, kK}) {
                QMat m(N, N);
                m(r, c) = q;
                m(c, r) = -conj(q);
                b.push_back(LieElement::from_matrix(m));
            }
    return b;
}

// ---- complex embedding ----

CMat embed(const QMat& m) {
    const int r = m.rows(), c = m.cols();
    CMat out(2 * r, 2 * c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            const Quat& q = m(i, j);
            const std::complex<double> z(q.re, q.i), w(q.j, q.k);
            out(i, j) = z;
            out(i, c + j) = w;
            out(r + i, j) = -std::conj(w);
            out(r + i, c + j) = std::conj(z);
        }
    return out;
}

QMat unembed(const CMat& c) {
    const int r = static_cast<int>(c.rows()) / 2, k = static_cast<int>(c.cols()) / 2;
    QMat m(r, k);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < k; ++j) {
            const auto z = c(i, j), w = c(i, k + j);
            m(i, j) = {z.real(), z.imag(), w.real(), w.imag()};
        }
    return m;
}

CMat expm_skew(const CMat& a) {
    const CMat h = std::complex<double>(0, 1) * a;
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const Eigen::VectorXcd ph =
        (std::complex<double>(0, -1) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

QMat expm(const QMat& a) { return unembed(expm_skew(embed(a))); }

}  // namespace hpn
