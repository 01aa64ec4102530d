#pragma once
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hpn/quat.hpp"

namespace hpn {

// Elements of g = u(n+1,H) with the split g = h + m refined relative to e.
//   m_par : M01 = a, M10 = -a                       (a real)
//   m_perp: M01 = M10 = s, M0,2+l = v_l, M2+l,0 = -conj(v_l)
//   h_par : M00 = M11 = p, M[2:,2:] = H
//   h_perp: M00 = s, M11 = -s, M1,2+l = v_l, M2+l,1 = -conj(v_l)

inline double chi(int n) { return 8.0 * (n + 2); }

struct MPar {
    double a = 0;
};
struct MPerp {
    Quat s;
    QVec v;
};
struct HPar {
    Quat p;
    QMat H;
};
struct HPerp {
    Quat s;
    QVec v;
};

enum class Subspace { MPar, MPerp, HPar, HPerp };
const char* to_string(Subspace s);

class LieElement {
public:
    explicit LieElement(int n = 1);
    LieElement(int n, const MPar& x);
    LieElement(int n, const MPerp& x);
    LieElement(int n, const HPar& x);
    LieElement(int n, const HPerp& x);

    // Throws DimensionError on wrong shape, DomainError if not anti-Hermitian.
    static LieElement from_matrix(const QMat& m, double tol = 1e-10);

    int n() const { return n_; }
    QMat matrix() const;

    MPar mpar;
    MPerp mperp;
    HPar hpar;
    HPerp hperp;

    LieElement project(Subspace s) const;
    double norm_inf() const;
    // largest component outside subspace s
    double outside(Subspace s) const;

    LieElement& operator+=(const LieElement& o);
    LieElement& operator-=(const LieElement& o);
    LieElement& operator*=(double s);

private:
    int n_;
};

LieElement operator+(LieElement a, const LieElement& b);
LieElement operator-(LieElement a, const LieElement& b);
LieElement operator*(double s, LieElement a);

// Cartan element e = (1, 0) in m_par.
LieElement cartan_e(int n);

// Matrix commutator g1 g2 - g2 g1.
LieElement bracket(const LieElement& g1, const LieElement& g2);

// Closed-form bracket tables.
HPar bracket(const MPar& a, const MPar& b);                                   // [m_par, m_par]
MPar bracket(const MPar& a, const HPar& b);                                   // [m_par, h_par]
HPar bracket(const HPar& a, const HPar& b);                                   // [h_par, h_par]
HPerp bracket(const MPar& a, const MPerp& b);                                 // [m_par, m_perp]
MPerp bracket(const MPar& a, const HPerp& b);                                 // [m_par, h_perp]
MPerp bracket(const HPar& a, const MPerp& b);                                 // [h_par, m_perp]
HPerp bracket(const HPar& a, const HPerp& b);                                 // [h_par, h_perp]
HPar bracket_hpar(const MPerp& a, const MPerp& b);                            // [m_perp, m_perp] -> h_par
HPerp bracket_hperp(const MPerp& a, const MPerp& b);                          // [m_perp, m_perp] -> h_perp
HPar bracket_hpar(const HPerp& a, const HPerp& b);                            // [h_perp, h_perp] -> h_par
HPerp bracket_hperp(const HPerp& a, const HPerp& b);                          // [h_perp, h_perp] -> h_perp
MPar bracket_mpar(const MPerp& a, const HPerp& b);                            // [m_perp, h_perp] -> m_par
MPerp bracket_mperp(const MPerp& a, const HPerp& b);                          // [m_perp, h_perp] -> m_perp

// Dispatches to the closed forms. g1, g2 must lie in s1, s2 (DomainError otherwise).
LieElement bracket_projected(const LieElement& g1, Subspace s1, const LieElement& g2, Subspace s2,
                             Subspace target, double tol = 1e-12);

// 4(n+2) Re tr(g1 g2)
double killing(const LieElement& g1, const LieElement& g2);
// -4(n+2) tr(A conj(A)^t + B conj(B)^t) in the complex splitting g = A + B j, polarized
double killing_components(const LieElement& g1, const LieElement& g2);
// tr(ad g1 ad g2) over a real basis of g
double killing_trace_ad(const LieElement& g1, const LieElement& g2);
// -chi Re(m1 conj(m2) + <m1, m2>) with m = m_par + m_perp_s
double killing_m(const MPar& a1, const MPerp& p1, const MPar& a2, const MPerp& p2, int n);
// chi Re(h1 h2 - <h1, h2>)
double killing_h(const HPerp& a, const HPerp& b, int n);

MPerp ad_e(const HPerp& x);
HPerp ad_e(const MPerp& x);
MPerp ad_e_inv(const HPerp& y);  // inverse of ad_e : m_perp -> h_perp
HPerp ad_e_inv(const MPerp& y);  // inverse of ad_e : h_perp -> m_perp

// (u, bu) -> (a u a^{-1}, a bu A); |a| = 1, A unitary.
HPerp equivalence_action(const Quat& a, const QMat& A, const HPerp& x, double tol = 1e-10);
// Ad(diag(a, a, A)) on the whole algebra.
LieElement adjoint_action(const Quat& a, const QMat& A, const LieElement& g, double tol = 1e-10);
void check_unit(const Quat& a, double tol);
void check_unitary(const QMat& A, double tol);

// e, m_perp^q, m_perp_l, m_perp_l^q (q = i, j, k)
std::vector<LieElement> basis_m(int n);
// Real basis of the full algebra (dimension (n+1)(2n+3)).
std::vector<LieElement> basis_g(int n);

// Complex embedding q = z + w j -> [[z, w], [-conj(w), conj(z)]].
using CMat = Eigen::MatrixXcd;
CMat embed(const QMat& m);
QMat unembed(const CMat& c);
// exp of an anti-Hermitian complex matrix through the Hermitian eigensolver.
CMat expm_skew(const CMat& a);
QMat expm(const QMat& a);

}  // namespace hpn
