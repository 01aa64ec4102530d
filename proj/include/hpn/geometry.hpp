#pragma once
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hpn/lie.hpp"
#include "hpn/state.hpp"

namespace hpn {

struct TransportOptions {
    int substeps = 4;                // Magnus steps per grid cell
    bool include_e = true;           // add e_x = (1/sqrt(chi)) e to the generator
    std::optional<QMat> psi0;        // initial frame, identity by default
    bool keep_fine = false;          // also store the frame at every substep
    double unitarity_tol = 1e-8;
};

// Group-valued frame along the grid. psi[i] is the frame at x_i; end is the frame at x = L.
struct FrameState {
    PeriodicGrid grid;
    int n = 1;
    int substeps = 4;
    std::vector<QMat> psi;
    QMat end;
    std::vector<QMat> fine;  // N*substeps + 1 samples when requested
    double unitarity_defect = 0;
};

// psi_x = psi (e_x + omega_x) by the two-stage Gauss Magnus method; stage values of (u, bu)
// come from spectral interpolation. Throws IntegrationAccuracyError on unitarity drift.
FrameState transport_frame(const StatePair& st, const TransportOptions& opt = {});

double unitarity_defect(const QMat& psi);

// Points of HP^n as unit vectors, with the first nonzero entry made positive real.
struct CurveSample {
    int n = 1;
    std::vector<QVec> gamma;
};

QVec gauge_fix(const QVec& g, double tol = 1e-12);
QVec column0(const QMat& psi);
CurveSample reconstruct_curve(const FrameState& frame);

struct GeometricInvariants {
    Field gNN, gNNx, gNxNx;
};

// Closed forms in terms of (u, bu).
GeometricInvariants geometric_invariants(const StatePair& st);

// The same quantities measured on a reconstructed curve: unit tangent T = hor(gamma_x),
// N = nabla T, nabla N, with sixth-order differences on the substep grid and metric
// g(V,V) = chi |hor V|^2. Values at grid points at least `margin` cells from the ends; others are NaN.
GeometricInvariants curve_invariants(const FrameState& fine_frame, int margin = 2);
// |gamma_x| under the metric at every grid point.
std::vector<double> curve_speed(const FrameState& fine_frame, int margin = 2);

// Horizontal projection and covariant derivative along the curve.
QVec horizontal(const QVec& gamma, const QVec& V);

struct MapReport {
    double residual = 0;             // map residual with the tangential sign fixed, max over components
    double residual_perp_scalar = 0;
    double residual_perp_vector = 0;
    double residual_tangential = 0;
    double residual_opposite_sign = 0;  // tangential term with the opposite sign, logged only
    double residual_gamma_t_h = 0;     // literal alternative form, logged only
    double scale = 0;                  // max |predicted|
    int points = 0;
};

// Central difference in time over states at equally spaced times (3 or 5 states, centred).
// States must vanish near x = 0 so that psi(t, 0) = I is a consistent gauge.
MapReport verify_mkdv_map(const std::vector<StatePair>& states, double dt, int substeps = 4,
                          double edge_tol = 1e-8);

struct WaveReport {
    double omega_t = 0;        // max |h-part of psi^-1 psi_t|
    double e_t = 0;            // max |m-part of psi^-1 psi_t - e_t| / sqrt(c)
    double nabla_gamma_t = 0;  // max |nabla_x gamma_t|_g / sqrt(c)
    double speed_spread = 0;   // max | |gamma_t|_g / sqrt(c) - 1 |
    double residual = 0;       // max of the above
    int points = 0;
};

// states: SG trajectory at equally spaced times around t_mid; e_t is the m-valued flow
// (one LieElement per grid point) at the centre time; psi(t, 0) = exp(t e_t(0)).
WaveReport verify_wave_map(const std::vector<StatePair>& states, double t_mid, double dt,
                           const std::vector<LieElement>& e_t, double c, int substeps = 4,
                           double edge_tol = 1e-8);

// 4(n+1) reals per point
void write_curve_csv(std::ostream& os, const CurveSample& c, const PeriodicGrid& g);
// sqrt(1 - |<p,q>|^2) with <p,q> = sum conj(p_k) q_k, for every pair
void write_chordal_csv(std::ostream& os, const CurveSample& c);

}  // namespace hpn
