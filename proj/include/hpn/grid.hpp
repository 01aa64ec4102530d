#pragma once
#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpn/quat.hpp"

namespace hpn {

struct PeriodicGrid {
    int N = 64;
    double L = 6.283185307179586;

    PeriodicGrid() = default;
    PeriodicGrid(int num_points, double length);  // throws DomainError for N < 8 or L <= 0

    double dx() const { return L / N; }
    double x(int i) const { return i * dx(); }
    // angular wavenumber of the r2c bin k (0 <= k <= N/2)
    double wavenumber(int k) const;
    bool operator==(const PeriodicGrid& o) const { return N == o.N && L == o.L; }
};

enum class FieldKind { Real, Imag, Quat, Vector, Matrix };
const char* to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

// Grid samples with a homogeneous value type. Every kind is stored as `width`
// quaternions per point; Real uses the real slot, Vector has width n-1 and
// Matrix has width (n-1)^2 in row-major order.
class Field {
public:
    Field() = default;
    Field(const PeriodicGrid& g, FieldKind kind, int width = 1);

    static Field real(const PeriodicGrid& g) { return {g, FieldKind::Real, 1}; }
    static Field imag(const PeriodicGrid& g) { return {g, FieldKind::Imag, 1}; }
    static Field quat(const PeriodicGrid& g) { return {g, FieldKind::Quat, 1}; }
    static Field vector(const PeriodicGrid& g, int m) { return {g, FieldKind::Vector, m}; }
    static Field matrix(const PeriodicGrid& g, int m) { return {g, FieldKind::Matrix, m * m}; }

    const PeriodicGrid& grid() const { return grid_; }
    FieldKind kind() const { return kind_; }
    int width() const { return width_; }
    int size() const { return grid_.N; }
    // side length for Matrix fields
    int mat_dim() const;

    Quat& operator()(int i, int c = 0) { return d_[static_cast<size_t>(i) * width_ + c]; }
    const Quat& operator()(int i, int c = 0) const { return d_[static_cast<size_t>(i) * width_ + c]; }
    double re(int i) const { return d_[static_cast<size_t>(i) * width_].re; }
    double& re(int i) { return d_[static_cast<size_t>(i) * width_].re; }

    QVec vec_at(int i) const;
    void set_vec(int i, const QVec& v);
    QMat mat_at(int i) const;
    void set_mat(int i, const QMat& m);

    std::vector<Quat>& data() { return d_; }
    const std::vector<Quat>& data() const { return d_; }
    double* raw() { return reinterpret_cast<double*>(d_.data()); }
    const double* raw() const { return reinterpret_cast<const double*>(d_.data()); }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);

    double maxabs() const;
    // max |Re| over the entries; meaningful for Imag fields
    double max_real_part() const;
    void drop_real_part();
    bool finite() const;
    Field zeros_like() const { return {grid_, kind_, width_}; }

private:
    PeriodicGrid grid_;
    FieldKind kind_ = FieldKind::Real;
    int width_ = 1;
    std::vector<Quat> d_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);
void require_compatible(const Field& a, const Field& b, const char* what);

// ---- spectral calculus ----

// Multiply every real component by m(k) in Fourier space. `odd` zeroes the Nyquist bin.
Field spectral_apply(const Field& f, const std::function<std::complex<double>(double)>& m, bool odd);

Field deriv_x(const Field& f, int order = 1);

enum class DinvConvention { ZeroMean, Anchored };
enum class MeanPolicy { Strict, Project };

struct AntiderivOptions {
    DinvConvention convention = DinvConvention::ZeroMean;
    MeanPolicy policy = MeanPolicy::Strict;
    // relative to max(|f|_inf, 1)
    double mean_tol = 1e-8;
};

// Zero-mean periodic antiderivative. Strict policy throws NonlocalityError(block, mean)
// when a component mean exceeds the tolerance; Project drops the mean.
// Anchored shifts the result to vanish at grid index 0.
Field antideriv_x(const Field& f, const AntiderivOptions& opt = {}, const std::string& block = "D^-1");

// Componentwise quadrature; one quaternion per width slot.
std::vector<Quat> integrate(const Field& f);
double integrate_real(const Field& f);
// per-component grid means
std::vector<Quat> mean(const Field& f);

// Samples of f(x + c) by spectral interpolation.
Field shift(const Field& f, double c);
// 2/3-rule filter.
Field dealias(const Field& f);

// Real L^2 pairing  int Re<a, b> dx  (sum over width slots).
double pairing(const Field& a, const Field& b);

// ---- I/O ----

// x, then 4 reals per quaternion slot
void write_field_csv(std::ostream& os, const Field& f);
Field read_field_csv(std::istream& is, FieldKind kind, double L);

// header (int32 n, int32 N, double L, int32 kind, int32 width) then row-major doubles
void write_field_binary(std::ostream& os, const Field& f, int n);
Field read_field_binary(std::istream& is, int* n = nullptr);

}  // namespace hpn
