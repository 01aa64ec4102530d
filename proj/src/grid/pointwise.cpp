#include "hpn/pointwise.hpp"

namespace hpn::pw {

namespace {
void same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid() == b.grid())) throw DimensionError(std::string(what) + ": fields live on different grids");
}
void scalar(const Field& a, const char* what) {
    if (a.width() != 1 || a.kind() == FieldKind::Vector || a.kind() == FieldKind::Matrix)
        throw DimensionError(std::string(what) + ": expected a scalar field");
}
}  // namespace

Field mul(const Field& a, const Field& b) {
    same_grid(a, b, "mul");
    scalar(a, "mul");
    scalar(b, "mul");
    Field out = Field::quat(a.grid());
    for (int i = 0; i < a.size(); ++i) out(i) = a(i) * b(i);
    return out;
}

Field real_times(const Field& r, const Field& s) {
    same_grid(r, s, "real_times");
    Field out = s;
    for (int i = 0; i < s.size(); ++i)
        for (int c = 0; c < s.width(); ++c) out(i, c) = r.re(i) * s(i, c);
    return out;
}

Field comm(const Field& a, const Field& b) {
    same_grid(a, b, "comm");
    Field out = Field::imag(a.grid());
    for (int i = 0; i < a.size(); ++i) out(i) = comm_C(a(i), b(i));
    return out;
}

Field acomm(const Field& a, const Field& b) {
    same_grid(a, b, "acomm");
    Field out = Field::real(a.grid());
    for (int i = 0; i < a.size(); ++i) out.re(i) = acomm_re(a(i), b(i));
    return out;
}

Field vinner(const Field& a, const Field& b) {
    require_compatible(a, b, "vinner");
    Field out = Field::quat(a.grid());
    const int m = a.width();
    for (int i = 0; i < a.size(); ++i) {
        Quat s;
        for (int l = 0; l < m; ++l) s += a(i, l) * conj(b(i, l));
        out(i) = s;
    }
    return out;
}

Field vcomm(const Field& a, const Field& b) {
    Field out = vinner(a, b) - vinner(b, a);
    Field r = Field::imag(a.grid());
    r.data() = std::move(out.data());
    return r;
}

Field vacomm(const Field& a, const Field& b) {
    require_compatible(a, b, "vacomm");
    Field out = Field::real(a.grid());
    const int m = a.width();
    for (int i = 0; i < a.size(); ++i) {
        double s = 0;
        for (int l = 0; l < m; ++l) {
            const Quat &x = a(i, l), &y = b(i, l);
            s += x.re * y.re + x.i * y.i + x.j * y.j + x.k * y.k;
        }
        out.re(i) = 2 * s;
    }
    return out;
}

Field norm2(const Field& v) {
    Field out = Field::real(v.grid());
    for (int i = 0; i < v.size(); ++i) {
        double s = 0;
        for (int l = 0; l < v.width(); ++l) s += hpn::norm2(v(i, l));
        out.re(i) = s;
    }
    return out;
}

Field matcomm(const Field& a, const Field& b) {
    require_compatible(a, b, "matcomm");
    const int m = a.width();
    Field out = Field::matrix(a.grid(), m);
    for (int i = 0; i < a.size(); ++i)
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) out(i, k * m + l) = conj(a(i, k)) * b(i, l) - conj(b(i, k)) * a(i, l);
    return out;
}

Field lmul(const Field& s, const Field& v) {
    same_grid(s, v, "lmul");
    scalar(s, "lmul");
    Field out = v.zeros_like();
    for (int i = 0; i < v.size(); ++i)
        for (int l = 0; l < v.width(); ++l) out(i, l) = s(i) * v(i, l);
    return out;
}

Field rmul(const Field& v, const Field& s) {
    same_grid(s, v, "rmul");
    scalar(s, "rmul");
    Field out = v.zeros_like();
    for (int i = 0; i < v.size(); ++i)
        for (int l = 0; l < v.width(); ++l) out(i, l) = v(i, l) * s(i);
    return out;
}

Field vmat(const Field& v, const Field& M) {
    same_grid(v, M, "vmat");
    const int m = v.width();
    if (M.width() != m * m) throw DimensionError("vmat: matrix size does not match vector length");
    Field out = v.zeros_like();
    for (int i = 0; i < v.size(); ++i)
        for (int l = 0; l < m; ++l) {
            Quat s;
            for (int k = 0; k < m; ++k) s += v(i, k) * M(i, k * m + l);
            out(i, l) = s;
        }
    return out;
}

Field as_quat(const Field& r) {
    Field out = Field::quat(r.grid());
    out.data() = r.data();
    return out;
}

Field re_part(const Field& q) {
    scalar(q, "re_part");
    Field out = Field::real(q.grid());
    for (int i = 0; i < q.size(); ++i) out.re(i) = q(i).re;
    return out;
}

}  // namespace hpn::pw
