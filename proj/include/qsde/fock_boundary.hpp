// fock_boundary.hpp — boundary jumps of Fock vectors in the range of the limit resolvent.
//
// Time-domain components Psi_n(tau_1..tau_n) of vectors in the domain of the limit
// generator are smooth off the hyperplanes tau_k = 0 and jump across them:
//   Psi_n(.., 0+, ..) = w Psi_n(.., 0-, ..) + l Psi_{n-1}(..),
// one coordinate removed on the right. The generator acts as
//   (H Psi)_n = i g Psi_n + sum_k i d/dtau_k Psi_n + i conj(l) w Psi_{n+1}(0-, tau),
// which is symmetric for the Fock inner product sum_n (1/n!) \int conj(Phi_n) Psi_n.
//
// Vectors are stored as finite sums of products of one-dimensional factors sampled on a
// common cell-centred grid (no node at 0), each factor carrying its exact traces at 0-/0+.
#pragma once

#include <vector>

#include "qsde/bath.hpp"
#include "qsde/linalg.hpp"
#include "qsde/scalar_limit.hpp"
#include "qsde/toy_jump.hpp"

namespace qsde {

struct SectorBoundary {
    Complex w{1.0, 0.0};
    Complex l{0.0, 0.0};
    Complex g{0.0, 0.0};
    Complex lstar_w{0.0, 0.0};

    static SectorBoundary from_sector(const ScalarSector& s);
    /// Throws InvalidInput if |w| != 1 or g + conj(g) != |l|^2 beyond round-off.
    void validate() const;
};

struct JumpResidualReport {
    int n = 0;
    int k = 0;
    double residual_abs = 0.0;
    double scale = 0.0;
};

// ---------------------------------------------------------------------------
// Closed-form resolvent integrands

/// prod_k [ v~(tau_k - t) (w on [0, t), 1 elsewhere) + l 1_[0,t)(tau_k) ] * h_weight.
/// Throws DomainError if some tau_k is exactly 0.
Complex phi_tilde_eval(int n, double t, const std::vector<double>& tau, const SectorBoundary& sb,
                       const GaussianBathFunction& v, Complex h_weight);

/// Same product with coordinate k (0-based) replaced by its one-sided limit at 0.
Complex phi_tilde_trace(int n, double t, int k, Side side, const std::vector<double>& tau_rest,
                        const SectorBoundary& sb, const GaussianBathFunction& v, Complex h_weight);

/// |phi_n(tau_k -> 0+) - w phi_n(tau_k -> 0-) - l phi_{n-1}(tau_rest)|; tau_rest has n - 1 entries.
JumpResidualReport jump_residual_integrand(int n, double t, int k, const std::vector<double>& tau_rest,
                                           const SectorBoundary& sb, const GaussianBathFunction& v,
                                           Complex h_weight);

struct ResolventOptions {
    double T_max = 40.0;
    int n_t_steps = 4000;
};

struct ResolventValues {
    std::vector<Complex> values;
    double truncation_bound = 0.0;  // bound on the neglected t > T_max tail
};

/// Phi~_n(tau) = \int_0^T_max exp{-(g + mu) t - conj(l) w \int_0^t v~(-s) ds} phi~_{n,t}(tau) dt
/// at each point of `points` (each of size n), by trapezoid quadrature on a grid refined by the
/// kinks t = tau_k. Throws InvalidInput if Re(g + mu) <= 0.
ResolventValues resolvent_component(int n, double mu, const std::vector<std::vector<double>>& points,
                                    const SectorBoundary& sb, const GaussianBathFunction& v,
                                    Complex h_weight, const ResolventOptions& opt = {});

/// Jump residual of the resolvent components at tau_k = 0 (same quadrature on both sides).
JumpResidualReport resolvent_jump_residual(int n, double mu, int k, const std::vector<double>& tau_rest,
                                           const SectorBoundary& sb, const GaussianBathFunction& v,
                                           Complex h_weight, const ResolventOptions& opt = {});

// ---------------------------------------------------------------------------
// Truncated Fock vectors

/// One-dimensional factor: samples on the grid plus exact one-sided values at 0.
struct TracedFactor {
    std::vector<Complex> samples;
    Complex left{0.0, 0.0};   // value at 0-
    Complex right{0.0, 0.0};  // value at 0+
};

/// coef * prod_k factors[k](tau_k)
struct ProductTerm {
    Complex coef{1.0, 0.0};
    std::vector<TracedFactor> factors;
};

struct TruncatedFockVector {
    LineGrid grid;
    std::vector<std::vector<ProductTerm>> components;  // index n = 0..n_max

    int n_max() const { return static_cast<int>(components.size()) - 1; }

    /// Component n at grid node indices idx (size n).
    Complex value(int n, const std::vector<int>& idx) const;
    /// Component n with coordinate k at 0- or 0+ and the others at grid nodes idx_rest.
    Complex trace(int n, int k, Side side, const std::vector<int>& idx_rest) const;

    /// sum_n (1/n!) \int conj(a_n) b_n with the summation-by-parts weights on each half-line.
    static Complex inner(const TruncatedFockVector& a, const TruncatedFockVector& b);
    double norm() const;
    /// |(Phi_n, Phi_n)| / n! per level.
    std::vector<double> level_norms2() const;
};

struct JumpVectorOptions {
    LineGrid grid{-6.0, 6.0, 12000};
    Complex gamma{0.1, 0.0};     // per-level amplitude; keeps level norms decaying
    double edge_width = 0.04;    // width of the smooth profile carrying the jump
    std::vector<Complex> coefs;  // weights of the seeds (default all 1)
    bool enforce_jump = true;    // false: use w = 1 in the factors (negative control)
};

/// Psi_n = sum_j c_j gamma^n prod_k x_j(tau_k) with
///   x_j = s_j (1 for tau < 0, w for tau > 0) + (l / gamma) e(tau) 1_{tau > 0},
/// s_j the time transform of seed j and e a centred Gaussian with e(0) = 1; every
/// component is symmetric and satisfies the jump condition exactly.
TruncatedFockVector build_jump_vector(int n_max, const SectorBoundary& sb,
                                      const std::vector<GaussianBathFunction>& seeds,
                                      const JumpVectorOptions& opt = {});

/// Largest jump residual over all n >= 1, k and `n_samples` deterministic node tuples.
std::vector<JumpResidualReport> vector_jump_residuals(const TruncatedFockVector& psi,
                                                      const SectorBoundary& sb, int n_samples = 64);

/// max over levels of |(N+1)^{-1}(A(d+) - w A(d-)) Psi - l Psi|_n / scale at sample points,
/// A(d+-) summing over all insertion slots.
double boundary_condition_defect(const TruncatedFockVector& psi, const SectorBoundary& sb,
                                 int n_samples = 64);

/// Max relative mismatch between stored traces and quadratic extrapolation of the samples.
double trace_consistency(const TruncatedFockVector& psi);

/// Max |Psi_n(perm idx) - Psi_n(idx)| relative to the level scale over sample tuples.
double permutation_asymmetry(const TruncatedFockVector& psi, int n_samples = 64);

/// Generator with a single insertion of the 0- trace in the annihilation term; the top
/// level receives no annihilation term (truncation). Throws PreconditionError if psi
/// violates the jump condition by more than 1e-6 relative (unless check_jump is false).
TruncatedFockVector apply_boundary_hamiltonian(const TruncatedFockVector& psi, const SectorBoundary& sb,
                                               bool check_jump = true);

struct PairingReport {
    double defect = 0.0;      // |(Phi, H Psi) - (H Phi, Psi)|
    double scale = 0.0;       // |Phi||H Psi| + |H Phi||Psi|
    double normalized = 0.0;  // defect / scale
    double truncation = 0.0;  // |g + conj(g)| |(Phi_top, Psi_top)| / n_max!
    // defect with the exact truncation residue i (g + conj(g)) (Phi_top, Psi_top) / n_max!
    // removed: the part that must vanish under grid refinement
    double discretization = 0.0;
};

PairingReport pairing_defect(const TruncatedFockVector& phi, const TruncatedFockVector& psi,
                             const SectorBoundary& sb, bool check_jump = true);

}  // namespace qsde
