#include "hpn/quat.hpp"

#include <algorithm>
#include <string>

namespace hpn {

namespace {
void require_same(size_t a, size_t b, const char* what) {
    if (a != b)
        throw DimensionError(std::string(what) + ": length " + std::to_string(a) + " vs " + std::to_string(b));
}
}  // namespace

ImQuat ImQuat::from(const Quat& q, double tol) {
    if (std::fabs(q.re) > tol) throw DomainError("quaternion has nonzero real part " + std::to_string(q.re));
    return {q.i, q.j, q.k};
}

QMat QMat::identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = kOne;
    return m;
}

QMat& QMat::operator+=(const QMat& o) {
    if (r_ != o.r_ || c_ != o.c_) throw DimensionError("matrix sum: shape mismatch");
    for (size_t t = 0; t < a_.size(); ++t) a_[t] += o.a_[t];
    return *this;
}
QMat& QMat::operator-=(const QMat& o) {
    if (r_ != o.r_ || c_ != o.c_) throw DimensionError("matrix difference: shape mismatch");
    for (size_t t = 0; t < a_.size(); ++t) a_[t] -= o.a_[t];
    return *this;
}
QMat& QMat::operator*=(double s) {
    for (auto& q : a_) q *= s;
    return *this;
}
QMat operator+(QMat a, const QMat& b) { return a += b; }
QMat operator-(QMat a, const QMat& b) { return a -= b; }
QMat operator*(QMat a, double s) { return a *= s; }
QMat operator*(double s, QMat a) { return a *= s; }

QMat operator*(const QMat& a, const QMat& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimension mismatch");
    QMat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int l = 0; l < a.cols(); ++l) {
            const Quat x = a(i, l);
            if (x == Quat{}) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += x * b(l, j);
        }
    return c;
}

QMat adjoint(const QMat& a) {
    QMat t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = conj(a(i, j));
    return t;
}

double maxabs(const QMat& a) {
    double m = 0;
    for (const auto& q : a.data()) m = std::max(m, maxabs(q));
    return m;
}

double antihermitian_defect(const QMat& a) {
    if (a.rows() != a.cols()) throw DimensionError("anti-Hermitian check needs a square matrix");
    return maxabs(a + adjoint(a));
}

Quat hermitian_inner(const QVec& x, const QVec& y) {
    require_same(x.size(), y.size(), "hermitian_inner");
    Quat s;
    for (size_t l = 0; l < x.size(); ++l) s += x[l] * conj(y[l]);
    return s;
}

double norm2(const QVec& x) {
    double s = 0;
    for (const auto& q : x) s += norm2(q);
    return s;
}

Quat comm_C(const QVec& a, const QVec& b) {
    require_same(a.size(), b.size(), "comm_C");
    return hermitian_inner(a, b) - hermitian_inner(b, a);
}

double acomm_A(const Quat& a, const Quat& b) {
    constexpr double tol = 1e-12;
    if (std::fabs(a.re) > tol * std::max(1.0, abs(a)) || std::fabs(b.re) > tol * std::max(1.0, abs(b)))
        throw DomainError("acomm_A: scalar arguments must be imaginary");
    return acomm_re(a, b);
}

double acomm_A(const QVec& a, const QVec& b) {
    require_same(a.size(), b.size(), "acomm_A");
    return 2.0 * hermitian_inner(a, b).re;
}

QMat matcomm_C(const QVec& a, const QVec& b) {
    require_same(a.size(), b.size(), "matcomm_C");
    const int m = static_cast<int>(a.size());
    QMat c(m, m);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) c(k, l) = conj(a[k]) * b[l] - conj(b[k]) * a[l];
    return c;
}

QVec operator+(QVec a, const QVec& b) {
    require_same(a.size(), b.size(), "vector sum");
    for (size_t l = 0; l < a.size(); ++l) a[l] += b[l];
    return a;
}
QVec operator-(QVec a, const QVec& b) {
    require_same(a.size(), b.size(), "vector difference");
    for (size_t l = 0; l < a.size(); ++l) a[l] -= b[l];
    return a;
}
QVec operator*(double s, QVec a) {
    for (auto& q : a) q *= s;
    return a;
}
QVec lmul(const Quat& s, const QVec& v) {
    QVec r(v.size());
    for (size_t l = 0; l < v.size(); ++l) r[l] = s * v[l];
    return r;
}
QVec rmul(const QVec& v, const Quat& s) {
    QVec r(v.size());
    for (size_t l = 0; l < v.size(); ++l) r[l] = v[l] * s;
    return r;
}
QVec vmat(const QVec& v, const QMat& m) {
    if (static_cast<int>(v.size()) != m.rows()) throw DimensionError("vector-matrix product: shape mismatch");
    QVec r(m.cols());
    for (int k = 0; k < m.rows(); ++k)
        for (int l = 0; l < m.cols(); ++l) r[l] += v[k] * m(k, l);
    return r;
}
double maxabs(const QVec& v) {
    double m = 0;
    for (const auto& q : v) m = std::max(m, maxabs(q));
    return m;
}

}  // namespace hpn
