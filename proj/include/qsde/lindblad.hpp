// lindblad.hpp — Markov generator built from the boundary coefficients.
//
//   L(B) = -G^* B - B G + sum_l L_l^* B L_l,   G = -i H0 + (1/2) sum_l L_l^* L_l
//
// The Heisenberg semigroup P_t = exp(t L) is computed on vectorized operators;
// a repeated-interaction (discrete cocycle) evolution serves as an independent oracle.
#pragma once

#include <vector>

#include "qsde/linalg.hpp"

namespace qsde {

struct LindbladModel {
    ComplexMatrix h0;
    std::vector<ComplexMatrix> channels;
    std::vector<ComplexMatrix> w;  // per-channel unitaries; empty means identity
    ComplexMatrix g;               // derived by make()
    // Weight of the jump term sum L^* B L. 1 is the unital generator; 1/2 is the
    // alternative normalization (not unital), -1 a sign-flipped negative control.
    double jump_scale = 1.0;

    static LindbladModel make(const ComplexMatrix& h0, std::vector<ComplexMatrix> channels,
                              std::vector<ComplexMatrix> w = {}, double jump_scale = 1.0);

    Eigen::Index dim() const { return h0.rows(); }
    ComplexMatrix channel_w(std::size_t l) const;
    /// Throws InvalidInput on shape mismatch, non-Hermitian h0 (> 1e-10) or non-unitary w.
    void validate() const;
};

/// Same model with the jump term's sign flipped (not completely positive).
LindbladModel flipped_dissipator(const LindbladModel& m);

/// Qubit amplitude damping: H0 = 0, L = sqrt(rate) |0><1|.
LindbladModel amplitude_damping(double rate = 1.0);

/// L(B). Throws InvalidInput on dimension mismatch.
ComplexMatrix apply_generator(const LindbladModel& m, const ComplexMatrix& b);

/// d^2 x d^2 matrix of L acting on column-stacked operators.
ComplexMatrix superoperator(const LindbladModel& m);

/// Schrödinger-picture (predual) generator rho -> -G rho - rho G^* + sum L rho L^*.
ComplexMatrix predual_superoperator(const LindbladModel& m);

/// P_t(B) = exp(t L)(B). Throws InvalidInput if t < 0.
ComplexMatrix heisenberg_evolve(const LindbladModel& m, const ComplexMatrix& b, double t);

struct RepeatedInteractionStats {
    int steps = 0;
    double max_unitary_defect = 0.0;  // of the polar-corrected step matrix
};

/// n = t / dt steps of B <- <vac| V^* (B (x) I) V |vac> with V the polar factor of
/// [[I - G dt, -L^* W sqrt(dt)], [L sqrt(dt), W]] (one block row/column per channel).
/// Throws InvalidInput unless 0 < dt < t and t / dt is an integer (to 1e-9).
ComplexMatrix repeated_interaction_evolve(const LindbladModel& m, const ComplexMatrix& b, double t,
                                          double dt, RepeatedInteractionStats* stats = nullptr);

/// Smallest eigenvalue of the Choi matrix sum_ij |i><j| (x) Phi_t(|i><j|) of the predual map.
double choi_min_eig(const LindbladModel& m, double t);

/// |Phi_t^*(I) - I| computed through the predual: trace preservation defect.
double trace_preservation_defect(const LindbladModel& m, double t);

}  // namespace qsde
