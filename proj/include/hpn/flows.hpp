#pragma once
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpn/biham.hpp"
#include "hpn/lie.hpp"

namespace hpn {

// Closed-form mKdV right side; adds chi^-1 (u_x, bu_x) unless the Galilean term is removed.
FieldPair mkdv_rhs(const StatePair& st, bool galilean_removed = false);

using RhsFn = std::function<FieldPair(const StatePair&)>;

// Classical RK4; the scalar part is re-projected to Im H after every stage.
// Throws BlowUpError(t + dt) on non-finite values.
StatePair step_rk4(const StatePair& st, const RhsFn& rhs, double dt, double t = 0);

// ---- sine-Gordon (-1 flow) ----

enum class SgBranch { Minus, Plus };  // sign of h_par at the left boundary
enum class SgMode { Line, Periodic };

struct SgOptions {
    SgBranch branch = SgBranch::Minus;
    SgMode mode = SgMode::Line;
    int substeps = 4;
    bool richardson = true;       // compare against 2x substeps
    double richardson_tol = 1e-7; // relative to chi
    double constraint_tol = 1e-8; // relative to c = chi^2
    double shooting_tol = 1e-8;   // smallest singular value accepted in periodic mode
};

struct SgSolution {
    FlowPair h;                 // (h_perp, bh_perp)
    Field h_par;
    std::vector<LieElement> E;  // (h_par, h_perp/2, -bh_perp) packed in m, per grid point
    double c = 0;               // h_par^2 + |h_perp|^2/4 + |bh_perp|^2 (= chi^2)
    double constraint_dev = 0;  // max relative deviation from c along x
    double richardson_err = 0;
};

// Solves D_x E + [omega_x, E] = 0 as E = Phi^-1 E0 Phi with Phi_x = Phi omega_x.
SgSolution sg_solve_h(const StatePair& st, const SgOptions& opt = {});
// Pointwise constraint h_par^2 + |h_perp|^2/4 + |bh_perp|^2.
Field sg_constraint(const SgSolution& s);
// Frame velocity e_t = chi^-1/2 E.
std::vector<LieElement> sg_frame_flow(const SgSolution& s);
// (u_t, bu_t) = chi^-1 (h_perp, bh_perp)
FieldPair sg_rhs(const StatePair& st, const SgOptions& opt = {}, SgSolution* sol = nullptr);
StatePair sg_step(const StatePair& st, double dt, const SgOptions& opt = {}, double t = 0);

// ---- simulation driver ----

enum class FlowKind { Mkdv, Sg, Hierarchy };
const char* to_string(FlowKind k);

struct SimConfig {
    FlowKind kind = FlowKind::Mkdv;
    int l = 1;                  // hierarchy level for FlowKind::Hierarchy
    double dt = 0;              // 0: cfl * dx^3 for the odd flows
    double t_end = 0;
    bool galilean_removed = false;
    double cfl = 0.05;
    bool dealias = true;
    int cadence = 1;            // snapshot every `cadence` steps
    SgOptions sg;
    AntiderivOptions dinv;      // for hierarchy flows
};

struct Snapshot {
    double t = 0;
    StatePair state;
    double sg_constraint_dev = 0;  // SG only
    double sg_c = 0;
};

struct Trajectory {
    FlowKind kind = FlowKind::Mkdv;
    std::vector<Snapshot> snaps;
};

// Effective step after the CFL check; ConfigError if dt exceeds the bound.
double resolve_dt(const SimConfig& cfg, const PeriodicGrid& g, int* steps = nullptr);
RhsFn make_rhs(const SimConfig& cfg);
Trajectory simulate(const SimConfig& cfg, const StatePair& init,
                    const std::function<void(const Snapshot&)>& observer = {});

struct ConservationReport {
    std::vector<double> times, H0, H1, H0_alt, sg_dev;
    double drift_H0 = 0, drift_H1 = 0, sg_dev_max = 0;  // max relative drift
    void to_json(std::ostream& os) const;
    void to_csv(std::ostream& os) const;
};

ConservationReport conserved_report(const Trajectory& tr);

// ---- reference solutions ----

// a sech(a (x - x0 + a^2 t / 4)) q, q a unit imaginary direction (default i)
StatePair mkdv_soliton(const PeriodicGrid& g, double a, double x0, double t, const Quat& q = kI);
// psi = 4 arctan(exp(a (x - x0) + 4 t / a)); u = psi_x / 2 q
StatePair sg_kink(const PeriodicGrid& g, double a, double x0, double t, const Quat& q = kI);
double sg_kink_psi(double a, double xi, double t);
// Kink carried by the first vector slot: bu_1 = phi_x q, phi = 4 arctan(exp(a (x - x0) + t / a)), u = 0.
// Solves phi_xt = sin(phi); q is any unit quaternion.
StatePair sg_vector_kink(const PeriodicGrid& g, int n, double a, double x0, double t, const Quat& q = kOne);

}  // namespace hpn
