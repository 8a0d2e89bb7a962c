#include "qsde/bath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "qsde/errors.hpp"

namespace qsde {

namespace {

constexpr int kGaussOrder = 16;

struct GaussLegendre {
    std::array<double, kGaussOrder> x{};
    std::array<double, kGaussOrder> w{};

    GaussLegendre() {
        for (int i = 0; i < kGaussOrder; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (kGaussOrder + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= kGaussOrder; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = kGaussOrder * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre& gauss_legendre() {
    static const GaussLegendre gl;
    return gl;
}

// erf(y) - erf(x) without cancellation in the tails.
double erf_diff(double x, double y) {
    if (x >= 0.0) return std::erfc(x) - std::erfc(y);
    if (y <= 0.0) return std::erfc(-y) - std::erfc(-x);
    return std::erf(y) - std::erf(x);
}

}  // namespace

Complex gaussian_window_integral(Complex coef, double rate, double center, double freq,
                                 double a, double b) {
    if (!(b > a) || coef == Complex{0.0, 0.0}) return 0.0;
    if (rate == 0.0) {
        if (!std::isfinite(a) || !std::isfinite(b)) {
            throw InvalidInput("gaussian_window_integral: non-decaying term on unbounded window");
        }
        if (freq == 0.0) return coef * (b - a);
        const Complex ik = kI * freq;
        return coef * (std::exp(ik * (b - center)) - std::exp(ik * (a - center))) / ik;
    }
    const double sr = std::sqrt(rate);
    if (freq == 0.0) {
        return coef * (0.5 * std::sqrt(std::numbers::pi / rate)) *
               erf_diff(sr * (a - center), sr * (b - center));
    }
    if (!std::isfinite(a) && !std::isfinite(b)) {
        return coef * std::sqrt(std::numbers::pi / rate) * std::exp(-freq * freq / (4.0 * rate));
    }
    // Oscillating Gaussian on a finite window: composite Gauss–Legendre over the
    // region where the envelope exceeds e^{-50}.
    const double reach = std::sqrt(50.0 / rate);
    const double lo = std::max(a, center - reach);
    const double hi = std::min(b, center + reach);
    if (!(hi > lo)) return 0.0;
    const double h_max = std::min(0.5 / sr, 1.0 / std::abs(freq));
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / h_max)));
    const double h = (hi - lo) / panels;
    const auto& gl = gauss_legendre();
    Complex sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        for (int i = 0; i < kGaussOrder; ++i) {
            const double u = mid + 0.5 * h * gl.x[i] - center;
            sum += gl.w[i] * std::exp(Complex(-rate * u * u, freq * u));
        }
    }
    return coef * sum * (0.5 * h);
}

Complex TimeTerm::raw(double tau) const {
    const double u = tau - center;
    return coef * std::exp(Complex(-rate * u * u, freq * u));
}

TimeFunction TimeFunction::indicator(double a, double b, Complex c) {
    TimeTerm t;
    t.coef = c;
    t.lo = a;
    t.hi = b;
    return TimeFunction({t});
}

Complex TimeFunction::operator()(double tau) const {
    Complex sum = 0.0;
    for (const auto& t : terms_) {
        if (tau > t.lo && tau < t.hi) sum += t.raw(tau);
    }
    return sum;
}

Complex TimeFunction::limit(double tau, Side side) const {
    Complex sum = 0.0;
    for (const auto& t : terms_) {
        const bool active = side == Side::kLeft ? (tau > t.lo && tau <= t.hi)
                                                : (tau >= t.lo && tau < t.hi);
        if (active) sum += t.raw(tau);
    }
    return sum;
}

TimeFunction TimeFunction::shifted(double s) const {
    auto out = terms_;
    for (auto& t : out) {
        t.center += s;
        t.lo += s;
        t.hi += s;
    }
    return TimeFunction(std::move(out));
}

TimeFunction TimeFunction::windowed(double a, double b) const {
    std::vector<TimeTerm> out;
    for (auto t : terms_) {
        t.lo = std::max(t.lo, a);
        t.hi = std::min(t.hi, b);
        if (t.hi > t.lo) out.push_back(t);
    }
    return TimeFunction(std::move(out));
}

TimeFunction TimeFunction::masked(double a, double b, Complex factor) const {
    if (factor == Complex{1.0, 0.0}) return *this;
    return *this + windowed(a, b).scaled(factor - 1.0);
}

TimeFunction TimeFunction::scaled(Complex c) const {
    auto out = terms_;
    for (auto& t : out) t.coef *= c;
    return TimeFunction(std::move(out));
}

TimeFunction TimeFunction::operator+(const TimeFunction& o) const {
    auto out = terms_;
    out.insert(out.end(), o.terms_.begin(), o.terms_.end());
    return TimeFunction(std::move(out));
}

Complex TimeFunction::integral(double a, double b) const {
    Complex sum = 0.0;
    for (const auto& t : terms_) {
        sum += gaussian_window_integral(t.coef, t.rate, t.center, t.freq, std::max(a, t.lo),
                                        std::min(b, t.hi));
    }
    return sum;
}

Complex TimeFunction::inner(const TimeFunction& x, const TimeFunction& y) {
    Complex sum = 0.0;
    for (const auto& s : x.terms_) {
        for (const auto& t : y.terms_) {
            const double lo = std::max(s.lo, t.lo);
            const double hi = std::min(s.hi, t.hi);
            if (!(hi > lo)) continue;
            // conj(s) * t = C exp(-P (tau - M)^2 + i K (tau - M))
            const double p = s.rate + t.rate;
            double m = 0.0;
            double log_mag = 0.0;
            if (p > 0.0) {
                m = (s.rate * s.center + t.rate * t.center) / p;
                const double dc = s.center - t.center;
                log_mag = -s.rate * t.rate * dc * dc / p;
            }
            const double k = t.freq - s.freq;
            const double phase = k * m + s.freq * s.center - t.freq * t.center;
            const Complex c = std::conj(s.coef) * t.coef * std::exp(Complex(log_mag, phase));
            sum += gaussian_window_integral(c, p, m, k, lo, hi);
        }
    }
    return sum;
}

GaussianBathFunction GaussianBathFunction::standard() {
    return {Complex(1.0 / std::sqrt(2.0 * std::numbers::pi), 0.0), 0.0, 1.0, 0.0};
}

void GaussianBathFunction::validate() const {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw InvalidInput("GaussianBathFunction: width must be positive and finite");
    }
    if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()) ||
        !std::isfinite(center) || !std::isfinite(time_shift)) {
        throw InvalidInput("GaussianBathFunction: non-finite field");
    }
}

Complex GaussianBathFunction::operator()(double omega) const {
    const double u = (omega - center) / width;
    return amplitude * std::exp(Complex(-0.5 * u * u, time_shift * omega));
}

GaussianBathFunction GaussianBathFunction::scaled(double alpha) const {
    if (!(alpha > 0.0)) throw InvalidInput("GaussianBathFunction::scaled: alpha must be positive");
    return {amplitude, center / alpha, width / alpha, time_shift * alpha};
}

GaussianBathFunction GaussianBathFunction::time_shifted(double s) const {
    return {amplitude, center, width, time_shift + s};
}

GaussianBathFunction GaussianBathFunction::times(Complex c) const {
    return {amplitude * c, center, width, time_shift};
}

double GaussianBathFunction::norm2() const {
    return std::norm(amplitude) * width * std::sqrt(std::numbers::pi);
}

TimeFunction GaussianBathFunction::time_transform() const {
    TimeTerm t;
    t.coef = amplitude * width;
    t.rate = 0.5 * width * width;
    t.center = time_shift;
    t.freq = -center;
    return TimeFunction({t});
}

Complex GaussianBathFunction::time_value(double tau) const {
    const double u = tau - time_shift;
    return amplitude * width * std::exp(Complex(-0.5 * width * width * u * u, -center * u));
}

Complex overlap(const GaussianBathFunction& u, const GaussianBathFunction& v, double s) {
    // conj(u) v e^{i omega s} = C exp(-p omega^2 + q omega + r)
    const double au = 0.5 / (u.width * u.width);
    const double av = 0.5 / (v.width * v.width);
    const double p = au + av;
    const Complex q(2.0 * au * u.center + 2.0 * av * v.center, v.time_shift - u.time_shift + s);
    const double r = -au * u.center * u.center - av * v.center * v.center;
    return std::conj(u.amplitude) * v.amplitude * std::sqrt(std::numbers::pi / p) *
           std::exp(q * q / (4.0 * p) + r);
}

}  // namespace qsde
