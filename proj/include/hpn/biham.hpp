#pragma once
#include <functional>
#include <iosfwd>
#include <vector>

#include "hpn/state.hpp"

namespace hpn {

// Nonlocal parts produced along the way: h_par (real), w_par (imaginary), W_par (matrix).
struct AuxFields {
    Field h_par;
    Field w_par;
    Field W_par;
};

struct OpContext {
    AntiderivOptions dinv;
};

// Cosymplectic operator H: covector (w, bw) -> flow.
FlowPair apply_H(const StatePair& st, const CovectorPair& w, const OpContext& ctx = {}, AuxFields* aux = nullptr);
// Symplectic operator J: flow (h, bh) -> covector.
CovectorPair apply_J(const StatePair& st, const FlowPair& h, const OpContext& ctx = {}, AuxFields* aux = nullptr);

// K = D + [u, .]_perp - [u, D^-1 [u, .]_par] on h_perp- or m_perp-valued fields,
// evaluated through full matrix commutators.
enum class KDomain { HPerp, MPerp };
FieldPair apply_K(const StatePair& st, const FieldPair& z, KDomain dom, const OpContext& ctx = {});
FlowPair H_via_K(const StatePair& st, const CovectorPair& w, const OpContext& ctx = {});
CovectorPair J_via_K(const StatePair& st, const FlowPair& h, const OpContext& ctx = {});

// R = H J and R* = J H.
FlowPair apply_R(const StatePair& st, const FlowPair& h, const OpContext& ctx = {});
CovectorPair apply_R_adjoint(const StatePair& st, const CovectorPair& w, const OpContext& ctx = {});
// The four blocks R11..R22 written out term by term.
FlowPair apply_R_explicit(const StatePair& st, const FlowPair& h, const OpContext& ctx = {});

// h_(l) = R^l (u_x, bu_x), cached per level for one state.
class Hierarchy {
public:
    Hierarchy(StatePair st, OpContext ctx = {});
    const FlowPair& flow(int l);
    const StatePair& state() const { return st_; }
    const OpContext& context() const { return ctx_; }

private:
    StatePair st_;
    OpContext ctx_;
    std::vector<FlowPair> cache_;
};

FlowPair hierarchy_flow(const StatePair& st, int l, const OpContext& ctx = {});

// h_par = -D^-1(1/2 A(u,h) - 1/2 A(bu,bh))
Field h_parallel(const StatePair& st, const FlowPair& h, const OpContext& ctx = {});
// (w_par, W_par) = (-D^-1(C(u,w) - 1/2 C(bu,bw)), D^-1 C(bu,bw))
std::pair<Field, Field> w_parallel(const StatePair& st, const CovectorPair& w, const OpContext& ctx = {});

// D^-1 Re(<u, h_(l)> + <bu, bh_(l)>) / (1 + 2l)
Field hamiltonian_density(const StatePair& st, int l, const OpContext& ctx = {});
Field hamiltonian_density(Hierarchy& hier, int l);

// Local densities: H0 = -u^2/2 + |bu|^2/2, the variant -u^2/2 + |bu|^2, and H1.
Field H0_density(const StatePair& st);
Field H0_density_alt(const StatePair& st);
Field H1_density(const StatePair& st);

using DensityFn = std::function<Field(const StatePair&)>;

// Central-difference gradient of int F dx, one grid value at a time (real L^2 convention).
CovectorPair variational_derivative_fd(const DensityFn& F, const StatePair& st, double eps = 1e-5);

// {F1, F2} = int Re<grad F1, H(grad F2)> dx
double poisson_bracket(const StatePair& st, const CovectorPair& grad1, const CovectorPair& grad2,
                       const OpContext& ctx = {});
double poisson_bracket(const StatePair& st, const DensityFn& F1, const DensityFn& F2, const OpContext& ctx = {},
                       double eps = 1e-5);
// omega(X1, X2) = int Re<X1, J(X2)> dx
double symplectic_pairing(const StatePair& st, const FlowPair& X1, const FlowPair& X2, const OpContext& ctx = {});
// Cyclic sum of directional derivatives of omega along constant fields X1, X2, X3.
double symplectic_closure_residual(const StatePair& st, const FlowPair& X1, const FlowPair& X2,
                                   const FlowPair& X3, const OpContext& ctx = {}, double eps = 1e-3);

// x, input columns, output columns
void write_operator_dump_csv(std::ostream& os, const FieldPair& in, const FieldPair& out);

}  // namespace hpn
