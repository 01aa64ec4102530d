#include "hpn/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hpn {

PeriodicGrid::PeriodicGrid(int num_points, double length) : N(num_points), L(length) {
    if (num_points < 8) throw DomainError("grid needs at least 8 points");
    if (!(length > 0)) throw DomainError("grid length must be positive");
}

double PeriodicGrid::wavenumber(int k) const { return 2.0 * std::numbers::pi * k / L; }

const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::Real: return "real";
        case FieldKind::Imag: return "imag";
        case FieldKind::Quat: return "quat";
        case FieldKind::Vector: return "vector";
        case FieldKind::Matrix: return "matrix";
    }
    return "?";
}

FieldKind field_kind_from_string(const std::string& s) {
    for (auto k : {FieldKind::Real, FieldKind::Imag, FieldKind::Quat, FieldKind::Vector, FieldKind::Matrix})
        if (s == to_string(k)) return k;
    throw DomainError("unknown field kind '" + s + "'");
}

Field::Field(const PeriodicGrid& g, FieldKind kind, int width)
    : grid_(g), kind_(kind), width_(width), d_(static_cast<size_t>(g.N) * std::max(width, 0)) {
    if (width < 0) throw DimensionError("negative field width");
    if ((kind == FieldKind::Real || kind == FieldKind::Imag || kind == FieldKind::Quat) && width != 1)
        throw DimensionError("scalar fields have width 1");
}

int Field::mat_dim() const {
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(width_))));
    if (m * m != width_) throw DimensionError("matrix field width is not a square");
    return m;
}

QVec Field::vec_at(int i) const {
    return QVec(d_.begin() + static_cast<ptrdiff_t>(i) * width_, d_.begin() + static_cast<ptrdiff_t>(i + 1) * width_);
}
void Field::set_vec(int i, const QVec& v) {
    if (static_cast<int>(v.size()) != width_) throw DimensionError("vector length does not match field width");
    std::copy(v.begin(), v.end(), d_.begin() + static_cast<ptrdiff_t>(i) * width_);
}
QMat Field::mat_at(int i) const {
    const int m = mat_dim();
    QMat M(m, m);
    std::copy_n(d_.begin() + static_cast<ptrdiff_t>(i) * width_, width_, M.data().begin());
    return M;
}
void Field::set_mat(int i, const QMat& M) {
    if (M.rows() * M.cols() != width_) throw DimensionError("matrix size does not match field width");
    std::copy(M.data().begin(), M.data().end(), d_.begin() + static_cast<ptrdiff_t>(i) * width_);
}

void require_compatible(const Field& a, const Field& b, const char* what) {
    if (!(a.grid() == b.grid())) throw DimensionError(std::string(what) + ": fields live on different grids");
    if (a.width() != b.width()) throw DimensionError(std::string(what) + ": field widths differ");
}

Field& Field::operator+=(const Field& o) {
    require_compatible(*this, o, "field sum");
    for (size_t t = 0; t < d_.size(); ++t) d_[t] += o.d_[t];
    return *this;
}
Field& Field::operator-=(const Field& o) {
    require_compatible(*this, o, "field difference");
    for (size_t t = 0; t < d_.size(); ++t) d_[t] -= o.d_[t];
    return *this;
}
Field& Field::operator*=(double s) {
    for (auto& q : d_) q *= s;
    return *this;
}
Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }

double Field::maxabs() const {
    double m = 0;
    for (const auto& q : d_) m = std::max(m, hpn::maxabs(q));
    return m;
}
double Field::max_real_part() const {
    double m = 0;
    for (const auto& q : d_) m = std::max(m, std::fabs(q.re));
    return m;
}
void Field::drop_real_part() {
    for (auto& q : d_) q.re = 0;
}
bool Field::finite() const {
    for (const auto& q : d_)
        if (!std::isfinite(q.re) || !std::isfinite(q.i) || !std::isfinite(q.j) || !std::isfinite(q.k)) return false;
    return true;
}

// ---- FFTW plumbing ----

namespace {

struct Plans {
    fftw_plan fwd = nullptr, bwd = nullptr;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

// Batched interleaved transforms: `howmany` series with stride `howmany`.
Plans get_plans(int N, int howmany) {
    static std::map<std::pair<int, int>, Plans> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find({N, howmany});
    if (it != cache.end()) return it->second;
    const int nc = N / 2 + 1;
    double* in = fftw_alloc_real(static_cast<size_t>(N) * howmany);
    fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(nc) * howmany);
    Plans p;
    int n[1] = {N};
    p.fwd = fftw_plan_many_dft_r2c(1, n, howmany, in, nullptr, howmany, 1, out, nullptr, howmany, 1,
                                   FFTW_ESTIMATE);
    p.bwd = fftw_plan_many_dft_c2r(1, n, howmany, out, nullptr, howmany, 1, in, nullptr, howmany, 1,
                                   FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    cache[{N, howmany}] = p;
    return p;
}

struct Buffers {
    double* r;
    fftw_complex* c;
    Buffers(size_t nr, size_t nc) : r(fftw_alloc_real(nr)), c(fftw_alloc_complex(nc)) {}
    ~Buffers() {
        fftw_free(r);
        fftw_free(c);
    }
    Buffers(const Buffers&) = delete;
    Buffers& operator=(const Buffers&) = delete;
};

}  // namespace

Field spectral_apply(const Field& f, const std::function<std::complex<double>(double)>& m, bool odd) {
    const int N = f.size(), hm = 4 * f.width();
    Field out = f.zeros_like();
    if (hm == 0) return out;
    const int nc = N / 2 + 1;
    const Plans p = get_plans(N, hm);
    Buffers b(static_cast<size_t>(N) * hm, static_cast<size_t>(nc) * hm);
    std::memcpy(b.r, f.raw(), sizeof(double) * N * hm);
    fftw_execute_dft_r2c(p.fwd, b.r, b.c);
    const PeriodicGrid& g = f.grid();
    for (int k = 0; k < nc; ++k) {
        std::complex<double> fac = m(g.wavenumber(k)) / static_cast<double>(N);
        if (N % 2 == 0 && k == N / 2 && odd) fac = 0;
        for (int c = 0; c < hm; ++c) {
            auto* z = reinterpret_cast<std::complex<double>*>(b.c[static_cast<size_t>(k) * hm + c]);
            *z *= fac;
        }
    }
    fftw_execute_dft_c2r(p.bwd, b.c, b.r);
    std::memcpy(out.raw(), b.r, sizeof(double) * N * hm);
    return out;
}

Field deriv_x(const Field& f, int order) {
    if (order < 0) throw DomainError("derivative order must be non-negative");
    if (order == 0) return f;
    const std::complex<double> I(0, 1);
    return spectral_apply(f, [&](double k) { return std::pow(I * k, order); }, order % 2 == 1);
}

std::vector<Quat> mean(const Field& f) {
    std::vector<Quat> s = integrate(f);
    for (auto& q : s) q = q / f.grid().L;
    return s;
}

Field antideriv_x(const Field& f, const AntiderivOptions& opt, const std::string& block) {
    const auto mu = mean(f);
    const double tol = opt.mean_tol * std::max(f.maxabs(), 1.0);
    if (opt.policy == MeanPolicy::Strict)
        for (const auto& q : mu)
            if (hpn::maxabs(q) > tol) {
                const double worst = std::max({std::fabs(q.re), std::fabs(q.i), std::fabs(q.j), std::fabs(q.k)});
                throw NonlocalityError(block, worst);
            }
    Field g = spectral_apply(
        f, [](double k) { return k == 0 ? std::complex<double>(0) : 1.0 / std::complex<double>(0, k); }, true);
    if (opt.convention == DinvConvention::Anchored) {
        const int w = g.width();
        for (int c = 0; c < w; ++c) {
            const Quat a = g(0, c);
            for (int i = 0; i < g.size(); ++i) g(i, c) -= a;
        }
    }
    return g;
}

std::vector<Quat> integrate(const Field& f) {
    std::vector<Quat> s(f.width());
    for (int i = 0; i < f.size(); ++i)
        for (int c = 0; c < f.width(); ++c) s[c] += f(i, c);
    for (auto& q : s) q *= f.grid().dx();
    return s;
}

double integrate_real(const Field& f) {
    if (f.width() != 1) throw DimensionError("integrate_real needs a scalar field");
    return integrate(f)[0].re;
}

Field shift(const Field& f, double c) {
    return spectral_apply(f, [c](double k) { return std::exp(std::complex<double>(0, k * c)); }, false);
}

Field dealias(const Field& f) {
    const double kc = f.grid().wavenumber(f.size() / 3);
    return spectral_apply(f, [kc](double k) { return std::complex<double>(k <= kc + 1e-12 ? 1.0 : 0.0); }, true);
}

double pairing(const Field& a, const Field& b) {
    require_compatible(a, b, "pairing");
    double s = 0;
    for (size_t t = 0; t < a.data().size(); ++t) {
        const Quat &x = a.data()[t], &y = b.data()[t];
        s += x.re * y.re + x.i * y.i + x.j * y.j + x.k * y.k;
    }
    return s * a.grid().dx();
}

// ---- I/O ----

void write_field_csv(std::ostream& os, const Field& f) {
    os << "x";
    for (int c = 0; c < f.width(); ++c)
        for (const char* p : {"re", "i", "j", "k"}) os << ",c" << c << "_" << p;
    os << '\n';
    char buf[32];
    for (int i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17e", f.grid().x(i));
        os << buf;
        for (int c = 0; c < f.width(); ++c) {
            const Quat& q = f(i, c);
            for (double v : {q.re, q.i, q.j, q.k}) {
                std::snprintf(buf, sizeof buf, "%.17e", v);
                os << ',' << buf;
            }
        }
        os << '\n';
    }
}

Field read_field_csv(std::istream& is, FieldKind kind, double L) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty field CSV");
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
        if ((r.size() - 1) % 4 != 0) throw ConfigError("field CSV row must hold x plus 4 reals per slot");
        if (!rows.empty() && r.size() != rows.front().size()) throw ConfigError("ragged field CSV");
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ConfigError("field CSV has no rows");
    const int width = static_cast<int>((rows.front().size() - 1) / 4);
    Field f(PeriodicGrid(static_cast<int>(rows.size()), L), kind, width);
    for (int i = 0; i < f.size(); ++i)
        for (int c = 0; c < width; ++c) {
            const double* p = rows[i].data() + 1 + 4 * c;
            f(i, c) = {p[0], p[1], p[2], p[3]};
        }
    return f;
}

void write_field_binary(std::ostream& os, const Field& f, int n) {
    const std::int32_t hdr[2] = {n, f.size()};
    os.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    const double L = f.grid().L;
    os.write(reinterpret_cast<const char*>(&L), sizeof L);
    const std::int32_t kw[2] = {static_cast<std::int32_t>(f.kind()), f.width()};
    os.write(reinterpret_cast<const char*>(kw), sizeof kw);
    os.write(reinterpret_cast<const char*>(f.raw()), static_cast<std::streamsize>(sizeof(double) * f.data().size() * 4));
}

Field read_field_binary(std::istream& is, int* n) {
    std::int32_t hdr[2], kw[2];
    double L;
    is.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    is.read(reinterpret_cast<char*>(&L), sizeof L);
    is.read(reinterpret_cast<char*>(kw), sizeof kw);
    if (!is || kw[0] < 0 || kw[0] > 4 || kw[1] < 0) throw ConfigError("malformed binary snapshot header");
    Field f(PeriodicGrid(hdr[1], L), static_cast<FieldKind>(kw[0]), kw[1]);
    is.read(reinterpret_cast<char*>(f.raw()), static_cast<std::streamsize>(sizeof(double) * f.data().size() * 4));
    if (!is) throw ConfigError("truncated binary snapshot");
    if (n) *n = hdr[0];
    return f;
}

}  // namespace hpn
