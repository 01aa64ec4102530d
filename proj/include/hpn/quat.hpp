#pragma once
#include <cmath>
#include <vector>

#include "hpn/errors.hpp"

namespace hpn {

// q = re + i*im_i + j*im_j + k*im_k
struct Quat {
    double re = 0, i = 0, j = 0, k = 0;

    constexpr Quat() = default;
    constexpr Quat(double r, double a, double b, double c) : re(r), i(a), j(b), k(c) {}
    constexpr explicit Quat(double r) : re(r) {}

    constexpr Quat& operator+=(const Quat& o) { re += o.re; i += o.i; j += o.j; k += o.k; return *this; }
    constexpr Quat& operator-=(const Quat& o) { re -= o.re; i -= o.i; j -= o.j; k -= o.k; return *this; }
    constexpr Quat& operator*=(double s) { re *= s; i *= s; j *= s; k *= s; return *this; }
    constexpr bool operator==(const Quat&) const = default;
};

constexpr Quat operator+(Quat a, const Quat& b) { return a += b; }
constexpr Quat operator-(Quat a, const Quat& b) { return a -= b; }
constexpr Quat operator-(const Quat& a) { return {-a.re, -a.i, -a.j, -a.k}; }
constexpr Quat operator*(Quat a, double s) { return a *= s; }
constexpr Quat operator*(double s, Quat a) { return a *= s; }
constexpr Quat operator/(Quat a, double s) { return a *= 1.0 / s; }

constexpr Quat operator*(const Quat& a, const Quat& b) {
    return {a.re * b.re - a.i * b.i - a.j * b.j - a.k * b.k,
            a.re * b.i + a.i * b.re + a.j * b.k - a.k * b.j,
            a.re * b.j - a.i * b.k + a.j * b.re + a.k * b.i,
            a.re * b.k + a.i * b.j - a.j * b.i + a.k * b.re};
}
constexpr Quat qmul(const Quat& a, const Quat& b) { return a * b; }

constexpr Quat conj(const Quat& q) { return {q.re, -q.i, -q.j, -q.k}; }
constexpr double norm2(const Quat& q) { return q.re * q.re + q.i * q.i + q.j * q.j + q.k * q.k; }
inline double abs(const Quat& q) { return std::sqrt(norm2(q)); }
constexpr Quat im(const Quat& q) { return {0, q.i, q.j, q.k}; }
inline double maxabs(const Quat& q) {
    return std::fmax(std::fmax(std::fabs(q.re), std::fabs(q.i)), std::fmax(std::fabs(q.j), std::fabs(q.k)));
}
inline Quat inverse(const Quat& q) { return conj(q) / norm2(q); }

inline constexpr Quat kOne{1, 0, 0, 0}, kI{0, 1, 0, 0}, kJ{0, 0, 1, 0}, kK{0, 0, 0, 1};

// Element of Q = Im H.
struct ImQuat {
    double i = 0, j = 0, k = 0;
    constexpr operator Quat() const { return {0, i, j, k}; }
    static ImQuat from(const Quat& q, double tol = 1e-12);
};

using QVec = std::vector<Quat>;

// Dense quaternion matrix, row-major.
class QMat {
public:
    QMat() = default;
    QMat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols) {}
    static QMat identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Quat& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const Quat& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }
    std::vector<Quat>& data() { return a_; }
    const std::vector<Quat>& data() const { return a_; }

    QMat& operator+=(const QMat& o);
    QMat& operator-=(const QMat& o);
    QMat& operator*=(double s);

private:
    int r_ = 0, c_ = 0;
    std::vector<Quat> a_;
};

QMat operator+(QMat a, const QMat& b);
QMat operator-(QMat a, const QMat& b);
QMat operator*(QMat a, double s);
QMat operator*(double s, QMat a);
QMat operator*(const QMat& a, const QMat& b);
QMat adjoint(const QMat& a);  // conjugate transpose
double maxabs(const QMat& a);
// max |M + adjoint(M)|
double antihermitian_defect(const QMat& a);

// <x,y> = sum x_l conj(y_l)
Quat hermitian_inner(const QVec& x, const QVec& y);
double norm2(const QVec& x);

// C(a,b) = ab - ba
constexpr Quat comm_C(const Quat& a, const Quat& b) { return a * b - b * a; }
// C(a,b) = <a,b> - <b,a>
Quat comm_C(const QVec& a, const QVec& b);
// A(a,b) = ab + ba; a, b imaginary
double acomm_A(const Quat& a, const Quat& b);
// A(a,b) = <a,b> + <b,a>
double acomm_A(const QVec& a, const QVec& b);
// C(a,b)_{kl} = conj(a_k) b_l - conj(b_k) a_l
QMat matcomm_C(const QVec& a, const QVec& b);

// Unchecked scalar anticommutator real part, for hot loops.
constexpr double acomm_re(const Quat& a, const Quat& b) { return 2.0 * (a * b).re; }

QVec operator+(QVec a, const QVec& b);
QVec operator-(QVec a, const QVec& b);
QVec operator*(double s, QVec a);
QVec lmul(const Quat& s, const QVec& v);  // s v
QVec rmul(const QVec& v, const Quat& s);  // v s
QVec vmat(const QVec& v, const QMat& m);  // row vector times matrix
double maxabs(const QVec& v);

}  // namespace hpn
