// bath.hpp — closed-form bath test functions and piecewise-Gaussian time-domain functions.
//
// Frequency functions v(omega) are complex Gaussians. Their time transform
//   v~(tau) = (2 pi)^{-1/2} \int e^{-i omega tau} v(omega) d omega
// is again Gaussian, and every object built from it by shifts, window
// multiplications and indicator terms stays in the TimeFunction class below,
// whose inner products and window integrals are evaluated in closed form.
#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "qsde/linalg.hpp"

namespace qsde {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Which one-sided limit to take when evaluating at a breakpoint.
enum class Side { kLeft = -1, kRight = 1 };

/// coef * exp(-rate (tau - center)^2 + i freq (tau - center)) on the open interval (lo, hi).
/// rate == 0 gives a constant (or pure phase) on the interval.
struct TimeTerm {
    Complex coef{0.0, 0.0};
    double rate = 0.0;
    double center = 0.0;
    double freq = 0.0;
    double lo = -kInf;
    double hi = kInf;

    Complex raw(double tau) const;
};

/// Finite sum of TimeTerms.
class TimeFunction {
public:
    TimeFunction() = default;
    explicit TimeFunction(std::vector<TimeTerm> terms) : terms_(std::move(terms)) {}

    /// c * 1_(a,b)
    static TimeFunction indicator(double a, double b, Complex c = 1.0);

    const std::vector<TimeTerm>& terms() const { return terms_; }

    /// Value at a point that is not a breakpoint of any term.
    Complex operator()(double tau) const;
    /// One-sided limit at tau.
    Complex limit(double tau, Side side) const;

    /// tau -> f(tau - s)
    TimeFunction shifted(double s) const;
    /// f * 1_(a,b)
    TimeFunction windowed(double a, double b) const;
    /// f * (factor on (a,b), 1 elsewhere)
    TimeFunction masked(double a, double b, Complex factor) const;
    TimeFunction scaled(Complex c) const;
    TimeFunction operator+(const TimeFunction& o) const;

    /// \int_a^b f(tau) d tau
    Complex integral(double a = -kInf, double b = kInf) const;
    /// \int conj(x) y
    static Complex inner(const TimeFunction& x, const TimeFunction& y);
    double norm2() const { return inner(*this, *this).real(); }

private:
    std::vector<TimeTerm> terms_;
};

/// \int_a^b coef exp(-rate (tau - center)^2 + i freq (tau - center)) d tau.
Complex gaussian_window_integral(Complex coef, double rate, double center, double freq,
                                 double a, double b);

/// v(omega) = amplitude * exp(-(omega - center)^2 / (2 width^2) + i time_shift * omega).
struct GaussianBathFunction {
    Complex amplitude{0.0, 0.0};
    double center = 0.0;
    double width = 1.0;
    double time_shift = 0.0;

    /// (2 pi)^{-1/2} exp(-omega^2 / 2): value (2 pi)^{-1/2} at the origin.
    static GaussianBathFunction standard();

    /// Throws InvalidInput on non-positive width or non-finite fields.
    void validate() const;

    Complex operator()(double omega) const;
    /// omega -> v(alpha omega)
    GaussianBathFunction scaled(double alpha) const;
    /// omega -> e^{i omega s} v(omega), i.e. the time transform shifted by s
    GaussianBathFunction time_shifted(double s) const;
    GaussianBathFunction times(Complex c) const;

    double norm2() const;
    /// Closed-form time transform.
    TimeFunction time_transform() const;
    Complex time_value(double tau) const;
};

/// (u, e^{i omega s} v) = \int conj(u(omega)) e^{i omega s} v(omega) d omega.
Complex overlap(const GaussianBathFunction& u, const GaussianBathFunction& v, double s);

}  // namespace qsde
