// scalar_limit.hpp — scaled-Hamiltonian limit for commuting coefficients.
//
// In a joint spectral sector of (H, K, R) the one-particle dynamics is the
// rank-one perturbation P_t = exp{it(omega + kappa |f_a><f_a|)} of the free
// frequency multiplier, f_a(omega) = f(a omega). Its matrix elements follow
// from the Duhamel formula
//   (u, P_s w) = (u, e^{i omega s} w) + i kappa \int_0^s (u, e^{i omega (s-r)} f_a) b_r dr,
//   b_r = (f_a, P_r w),
// where b solves a Volterra equation of the second kind with the Gaussian
// kernel (f_a, e^{i omega s} f_a). As a -> 0 the group converges to a
// shift-with-window-multiplier; that limit (and its cocycle) acts on coherent
// vectors in closed form and is implemented by LimitGroup.
#pragma once

#include <optional>
#include <vector>

#include "qsde/bath.hpp"
#include "qsde/coefficients.hpp"
#include "qsde/linalg.hpp"

namespace qsde {

/// One joint eigenvalue tuple (nu, kappa, rho e^{i phi}) of (H, K, R).
struct ScalarSector {
    double nu = 0.0;
    double kappa = 0.0;
    double rho = 0.0;
    double phi = 0.0;

    static ScalarSector from_values(Complex h, Complex k, Complex r);

    Complex r() const;
    /// (2 + i kappa) / (2 - i kappa)
    Complex w() const;
    /// 2 i r / (2 - i kappa)
    Complex l() const;
    /// -i nu + rho^2 / (2 - i kappa)
    Complex g() const;
    /// conj(l) w, the coefficient of the annihilation term of the limit generator.
    Complex lstar_w() const;
};

/// Joint sector of the coefficient family together with its scalar data.
struct CoefficientSector {
    ComplexMatrix projector;
    ScalarSector scalar;
};

/// Joint spectral decomposition of (H, K, R). Throws NotCommuting otherwise.
std::vector<CoefficientSector> coefficient_sectors(const SymmetricCoefficients& c);

/// Samples on the uniform grid t_n = n dt, n = 0..N, and their running trapezoid integral.
struct VolterraSolution {
    double dt = 0.0;
    std::vector<double> t_grid;
    std::vector<Complex> samples;
    std::vector<Complex> cumulative;

    Complex total() const { return cumulative.back(); }
};

/// (u_a, e^{i omega s} v_a) with u_a(omega) = u(a omega).
Complex overlap_kernel(const GaussianBathFunction& u, const GaussianBathFunction& v, double alpha,
                       double s);

/// Smallest step count that resolves the kernel width on [0, T] (dt <= alpha / 8).
int recommended_steps(double alpha, double T);

/// a_t = (f_a, P_t f_a) for the standard coupling f, by trapezoid Volterra iteration.
/// Throws ResolutionError if T / n_steps > alpha / 4.
VolterraSolution solve_volterra_a(double alpha, double kappa, double T, int n_steps,
                                  const GaussianBathFunction& coupling = GaussianBathFunction::standard());

/// (u, P_t v) on the grid; u and v are used as given (scale them beforehand if wanted).
VolterraSolution pairing_evolution(const GaussianBathFunction& u, const GaussianBathFunction& v,
                                   const ScalarSector& sector, double alpha, double T, int n_steps,
                                   const GaussianBathFunction& coupling = GaussianBathFunction::standard());

/// Scalar ingredients of a sector's coherent matrix element at time t:
///   q0 = \int_0^t (f_a, P_s f_a) ds,
///   q1 = (v2, P_t v1),             q2 = (v2, \int_0^t P_s f_a ds),
///   q3 = \int_0^t (f_a, P_s v1) ds, q4 = \int_0^t dr \int_0^r (f_a, P_s f_a) ds.
struct PrelimitQuantities {
    Complex q0{0.0, 0.0};
    Complex q1{0.0, 0.0};
    Complex q2{0.0, 0.0};
    Complex q3{0.0, 0.0};
    Complex q4{0.0, 0.0};
};

/// Single-grid evaluation (second-order accurate in dt).
PrelimitQuantities prelimit_quantities(const GaussianBathFunction& v2, const GaussianBathFunction& v1,
                                       double kappa, double alpha, double t, int n_steps,
                                       const GaussianBathFunction& coupling = GaussianBathFunction::standard());

struct RefinementOptions {
    double tol = 1e-8;       // stop when successive extrapolated values agree to this
    int max_steps = 1 << 16;
};

struct RefinedQuantities {
    PrelimitQuantities value;
    int n_steps = 0;      // finest grid used
    double change = 0.0;  // last change of the extrapolated values
};

/// Step doubling from recommended_steps with Richardson extrapolation of every quantity.
/// Throws ResolutionError if the tolerance is not reached within max_steps.
RefinedQuantities refined_prelimit_quantities(const GaussianBathFunction& v2,
                                              const GaussianBathFunction& v1, double kappa,
                                              double alpha, double t,
                                              const RefinementOptions& opt = {},
                                              const GaussianBathFunction& coupling = GaussianBathFunction::standard());

/// (h2 (x) psi(v2), U_t^{(a)} h1 (x) psi(v1)), quantities taken from the n_steps and 2 n_steps
/// grids combined by Richardson extrapolation.
Complex prelimit_matrix_element(const SymmetricCoefficients& coeffs, const ComplexVector& h2,
                                const GaussianBathFunction& v2, const ComplexVector& h1,
                                const GaussianBathFunction& v1, double t, double alpha, int n_steps);

/// Time-domain profile of P_t v and its distance to the limit operator.
struct EvolvedProfileReport {
    double distance = 0.0;     // |P_t v - limit(v)| / |v|
    double norm_defect = 0.0;  // | |P_t v|^2 / |v|^2 - 1 |
    int n_steps = 0;
    int n_tau = 0;
};

/// The limit operator applied to v is the shift by t followed by multiplication with
/// w on (0, t) in the time domain.
EvolvedProfileReport evolved_profile_report(const GaussianBathFunction& v, double kappa, double alpha,
                                            double t, int n_steps = 0,
                                            const GaussianBathFunction& coupling = GaussianBathFunction::standard());

/// Norm identity for the evolved coherent vector of one sector:
/// U_t h (x) psi(v) = c_t h (x) psi(x_t), x_t = P_t v + i r \int_0^t P_s f_a ds, and
/// |c_t|^2 e^{|x_t|^2} must equal e^{|v|^2}.
struct PrelimitNormReport {
    double log_norm_defect = 0.0;  // |log|c_t|^2 + |x_t|^2 - |v|^2|
    double argument_norm2 = 0.0;   // |x_t|^2
    int n_steps = 0;
};

/// Richardson-combined over the n_steps and 2 n_steps grids (n_steps = 0: 2 * recommended).
PrelimitNormReport prelimit_norm_identity(const GaussianBathFunction& v, const ScalarSector& sector,
                                          double alpha, double t, int n_steps = 0,
                                          const GaussianBathFunction& coupling = GaussianBathFunction::standard());

struct FourLimitsRow {
    double alpha = 0.0;
    double kappa = 0.0;
    int quantity_id = 0;  // 1..4
    Complex value{0.0, 0.0};
    Complex limit{0.0, 0.0};
    double abs_error = 0.0;
    double tolerance = 0.0;  // numerical accuracy of `value`
};

/// The four limits along a decreasing alpha schedule, four rows per alpha.
std::vector<FourLimitsRow> four_limits_report(const std::vector<double>& alpha_schedule, double kappa,
                                              double t, const GaussianBathFunction& v,
                                              const RefinementOptions& opt = {});

/// True if the error of `quantity_id` does not increase (up to the reported solver
/// tolerance) over the last `tail` schedule entries.
bool tail_non_increasing(const std::vector<FourLimitsRow>& rows, int quantity_id, int tail = 3);

// ---------------------------------------------------------------------------
// Limit group on coherent vectors

/// weight * h (x) psi(x), optionally known to lie in a single sector.
struct CoherentTerm {
    Complex weight{1.0, 0.0};
    ComplexVector h;
    TimeFunction x;  // time-domain argument of the exponential vector
    int sector = -1;
};

/// Finite superposition of coherent vectors.
struct CoherentState {
    std::vector<CoherentTerm> terms;

    static CoherentState make(const ComplexVector& h, const TimeFunction& x);
    static CoherentState make(const ComplexVector& h, const GaussianBathFunction& v);

    static Complex inner(const CoherentState& a, const CoherentState& b);
    double norm2() const { return inner(*this, *this).real(); }
};

class LimitGroup {
public:
    explicit LimitGroup(const SymmetricCoefficients& coeffs);

    const std::vector<CoefficientSector>& sectors() const { return sectors_; }

    /// U_t
    CoherentState evolve(const CoherentState& psi, double t) const;
    /// u(T) for T = (a, b): window multiplier w, creation l 1_T, annihilation -conj(l) w.
    CoherentState cocycle(const CoherentState& psi, double a, double b) const;
    /// J_s: time-domain shift by s.
    static CoherentState shift(const CoherentState& psi, double s);

private:
    template <class Step>
    CoherentState apply(const CoherentState& psi, Step&& step) const;

    std::vector<CoefficientSector> sectors_;
};

Complex limit_matrix_element(const SymmetricCoefficients& coeffs, const ComplexVector& h2,
                             const GaussianBathFunction& v2, const ComplexVector& h1,
                             const GaussianBathFunction& v1, double t);

/// (h2 (x) psi(x2), u(a, b) h1 (x) psi(x1)). Throws InvalidInput if b < a.
Complex cocycle_element(double a, double b, const SymmetricCoefficients& coeffs,
                        const ComplexVector& h2, const TimeFunction& x2, const ComplexVector& h1,
                        const TimeFunction& x1);
Complex cocycle_element(double a, double b, const SymmetricCoefficients& coeffs,
                        const ComplexVector& h2, const GaussianBathFunction& v2,
                        const ComplexVector& h1, const GaussianBathFunction& v1);

}  // namespace qsde
