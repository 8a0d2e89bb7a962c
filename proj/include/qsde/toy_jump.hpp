// toy_jump.hpp — transport on the line with a shrinking potential and its phase-jump limit.
//
// U_t^a psi(x) = psi(x - t) exp{i lambda \int_0^t V_a(x - t + s) ds}, V_a a Gaussian of
// variance a. As a -> 0 the phase becomes lambda on [0, t), i.e. the limit group
// multiplies the part of the wave that crossed the origin by e^{i lambda}.
#pragma once

#include <functional>
#include <vector>

#include "qsde/linalg.hpp"

namespace qsde {

/// Cell-centred grid x_i = x_min + (i + 1/2) dx with the origin on a cell edge,
/// so the nodes nearest to 0 are -dx/2 and +dx/2.
struct LineGrid {
    double x_min = -1.0;
    double x_max = 1.0;
    int n = 2;

    double dx() const { return (x_max - x_min) / n; }
    double x(int i) const { return x_min + (i + 0.5) * dx(); }
    /// Index of the first node with x > 0.
    int first_positive() const;
    /// Throws InvalidInput unless x_min < 0 < x_max and 0 falls on a cell edge.
    void validate() const;
};

struct WaveSample {
    LineGrid grid;
    std::vector<Complex> values;

    static WaveSample from_function(const LineGrid& grid, const std::function<Complex(double)>& fn);
    double norm() const;
    /// Discrete L2 inner product (midpoint rule) of two samples on the same grid.
    static Complex inner(const WaveSample& a, const WaveSample& b);
};

/// \int_0^t V_a(x - t + s) ds in closed form.
double toy_phase(double x, double t, double alpha);

WaveSample prelimit_evolve(const WaveSample& psi, double t, double lambda, double alpha);
WaveSample limit_evolve(const WaveSample& psi, double t, double lambda);

/// R_mu psi = \int_0^inf e^{-mu t} U_t psi dt for the limit group. The quadrature runs back
/// to the left grid edge; requires T_max >= 40 / mu so that the neglected tail
/// e^{-mu T_max} |psi|_inf / mu is negligible.
WaveSample resolvent_apply(const WaveSample& psi, double mu, double lambda, double T_max);

/// max |R' + mu R - psi| over nodes at least `guard` cells away from the origin and the edges.
double resolvent_residual(const WaveSample& r, const WaveSample& psi, double mu, int guard = 3);

/// One-sided limit at 0 by quadratic extrapolation from the three nearest nodes.
Complex one_sided_trace(const WaveSample& phi, int side);

/// phi(0+) / phi(0-). Throws PreconditionError when |phi(0-)| < 1e-12.
Complex jump_ratio(const WaveSample& phi);

/// conj(phi) psi at 0+ minus the same at 0-.
Complex boundary_flux(const WaveSample& phi, const WaveSample& psi);

/// |(phi, i psi') - (i phi', psi)| with summation-by-parts differences on each half-line.
/// Throws PreconditionError if either input violates phi(0+) = e^{i lambda} phi(0-) by more
/// than 1e-6 (relative to the trace size).
double symmetry_defect_1d(const WaveSample& phi, const WaveSample& psi, double lambda);

}  // namespace qsde
