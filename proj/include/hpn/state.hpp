#pragma once
#include <random>

#include "hpn/grid.hpp"

namespace hpn {

// A pair (scalar, vector) of fields: the state (u, bu), a flow (h, bh) or a covector (w, bw).
struct FieldPair {
    Field s;  // imaginary quaternion field
    Field v;  // quaternion vector field of length n-1

    FieldPair() = default;
    FieldPair(Field scalar, Field vec);
    static FieldPair zeros(const PeriodicGrid& g, int n);

    int n() const { return v.width() + 1; }
    const PeriodicGrid& grid() const { return s.grid(); }
    double maxabs() const { return std::max(s.maxabs(), v.maxabs()); }
    bool finite() const { return s.finite() && v.finite(); }

    FieldPair& operator+=(const FieldPair& o);
    FieldPair& operator-=(const FieldPair& o);
    FieldPair& operator*=(double a);
};

using StatePair = FieldPair;
using FlowPair = FieldPair;
using CovectorPair = FieldPair;

FieldPair operator+(FieldPair a, const FieldPair& b);
FieldPair operator-(FieldPair a, const FieldPair& b);
FieldPair operator*(double a, FieldPair b);

FieldPair deriv_x(const FieldPair& p, int order = 1);
// int Re<a_s, b_s> + Re<a_v, b_v> dx
double pairing(const FieldPair& a, const FieldPair& b);

// (u, bu) -> (a u a^-1, a bu A) at every grid point.
FieldPair equivalence_action(const Quat& a, const QMat& A, const FieldPair& p, double tol = 1e-10);

// Band-limited random state: modes 1..K with amplitude amp/k, imaginary scalar part.
StatePair random_state(const PeriodicGrid& g, int n, std::mt19937_64& rng, int modes = 4, double amp = 0.5);
// Multiply by exp(-((x - center)/width)^2).
StatePair localize(const StatePair& p, double center, double width);

}  // namespace hpn
