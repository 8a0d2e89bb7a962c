#include "qsde/toy_jump.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsde/errors.hpp"

namespace qsde {

namespace {

// Quadratic extrapolation to distance 0 from nodes at distances dx/2, 3dx/2, 5dx/2.
constexpr double kTraceW[3] = {1.875, -1.25, 0.375};

void require_same_grid(const WaveSample& a, const WaveSample& b) {
    if (a.grid.n != b.grid.n || a.grid.x_min != b.grid.x_min || a.grid.x_max != b.grid.x_max) {
        throw InvalidInput("wave samples live on different grids");
    }
}

// psi(y) by linear interpolation between nodes; zero outside the sampled range.
Complex interpolate(const WaveSample& psi, double y) {
    const auto& g = psi.grid;
    const double p = (y - g.x_min) / g.dx() - 0.5;
    if (p < 0.0 || p > g.n - 1) return 0.0;
    const int i = std::min(static_cast<int>(p), g.n - 2);
    const double f = p - i;
    return (1.0 - f) * psi.values[i] + f * psi.values[i + 1];
}

WaveSample shifted_with_phase(const WaveSample& psi, double t, const std::function<Complex(double)>& phase) {
    psi.grid.validate();
    if (!(t >= 0.0)) throw InvalidInput("evolution time must be non-negative");
    if (t >= psi.grid.x_max - psi.grid.x_min) throw DomainError("evolution time exceeds grid coverage");
    WaveSample out{psi.grid, std::vector<Complex>(psi.values.size())};
    for (int i = 0; i < psi.grid.n; ++i) {
        const double x = psi.grid.x(i);
        out.values[i] = interpolate(psi, x - t) * phase(x);
    }
    return out;
}

// (u, D v)_H + (D u, v)_H restricted to nodes [a, b] (summation-by-parts pair).
Complex sbp_pairing(const std::vector<Complex>& u, const std::vector<Complex>& v, int a, int b, double dx) {
    auto d = [&](const std::vector<Complex>& f, int i) {
        if (i == a) return (f[a + 1] - f[a]) / dx;
        if (i == b) return (f[b] - f[b - 1]) / dx;
        return (f[i + 1] - f[i - 1]) / (2.0 * dx);
    };
    Complex s = 0.0;
    for (int i = a; i <= b; ++i) {
        const double h = (i == a || i == b) ? 0.5 * dx : dx;
        s += h * (std::conj(u[i]) * d(v, i) + std::conj(d(u, i)) * v[i]);
    }
    return s;
}

void require_jump(const WaveSample& phi, double lambda, const char* which) {
    const Complex left = one_sided_trace(phi, -1);
    const Complex right = one_sided_trace(phi, +1);
    const double scale = std::max(std::abs(left), std::abs(right));
    const Complex mismatch = right - std::exp(kI * lambda) * left;
    if (std::abs(mismatch) > 1e-6 * scale + 1e-14) {
        std::ostringstream os;
        os << "symmetry_defect_1d: " << which << " violates the jump condition (measured factor ";
        if (std::abs(left) > 0.0) os << right / left; else os << "undefined";
        os << ", expected " << std::exp(kI * lambda) << ")";
        throw PreconditionError(os.str());
    }
}

}  // namespace

int LineGrid::first_positive() const { return static_cast<int>(std::lround(-x_min / dx())); }

void LineGrid::validate() const {
    if (!(x_min < 0.0 && x_max > 0.0)) throw InvalidInput("LineGrid: need x_min < 0 < x_max");
    if (n < 8) throw InvalidInput("LineGrid: need at least 8 cells");
    const double edge = -x_min / dx();
    if (std::abs(edge - std::round(edge)) > 1e-8) {
        throw InvalidInput("LineGrid: the origin must fall on a cell edge");
    }
    const int k = first_positive();
    if (k < 3 || n - k < 3) throw InvalidInput("LineGrid: need three nodes on each side of the origin");
}

WaveSample WaveSample::from_function(const LineGrid& grid, const std::function<Complex(double)>& fn) {
    grid.validate();
    WaveSample s{grid, std::vector<Complex>(grid.n)};
    for (int i = 0; i < grid.n; ++i) s.values[i] = fn(grid.x(i));
    return s;
}

double WaveSample::norm() const { return std::sqrt(inner(*this, *this).real()); }

Complex WaveSample::inner(const WaveSample& a, const WaveSample& b) {
    require_same_grid(a, b);
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
    return s * a.grid.dx();
}

double toy_phase(double x, double t, double alpha) {
    const double s = std::sqrt(2.0 * alpha);
    return 0.5 * (std::erf(x / s) - std::erf((x - t) / s));
}

WaveSample prelimit_evolve(const WaveSample& psi, double t, double lambda, double alpha) {
    if (!(alpha > 0.0)) throw InvalidInput("prelimit_evolve: alpha must be positive");
    return shifted_with_phase(psi, t, [&](double x) { return std::exp(kI * lambda * toy_phase(x, t, alpha)); });
}

WaveSample limit_evolve(const WaveSample& psi, double t, double lambda) {
    const Complex jump = std::exp(kI * lambda);
    return shifted_with_phase(psi, t, [&](double x) { return (x >= 0.0 && x < t) ? jump : Complex(1.0); });
}

WaveSample resolvent_apply(const WaveSample& psi, double mu, double lambda, double T_max) {
    psi.grid.validate();
    if (!(mu > 0.0)) throw InvalidInput("resolvent_apply: mu must be positive");
    if (T_max < 40.0 / mu) throw InvalidInput("resolvent_apply: T_max must be at least 40 / mu");
    const auto& g = psi.grid;
    const double dx = g.dx();
    const int k = g.first_positive();
    const double e1 = std::exp(-mu * dx);
    const double eh = std::exp(-mu * 0.5 * dx);
    const auto& p = psi.values;

    // F(x) = \int_0^inf e^{-mu t} psi(x - t) dt, trapezoid recursion; the cell that
    // contains the origin is split so a jump of psi there is integrated exactly.
    std::vector<Complex> F(g.n);
    F[0] = 0.0;
    Complex f0 = 0.0;
    for (int i = 1; i < g.n; ++i) {
        if (i == k) {
            f0 = eh * F[i - 1] + 0.25 * dx * (eh * p[i - 1] + one_sided_trace(psi, -1));
            F[i] = eh * f0 + 0.25 * dx * (eh * one_sided_trace(psi, +1) + p[i]);
        } else {
            F[i] = e1 * F[i - 1] + 0.5 * dx * (e1 * p[i - 1] + p[i]);
        }
    }
    const Complex jump = std::exp(kI * lambda) - 1.0;
    WaveSample out{g, std::move(F)};
    for (int i = k; i < g.n; ++i) out.values[i] += jump * std::exp(-mu * g.x(i)) * f0;
    return out;
}

double resolvent_residual(const WaveSample& r, const WaveSample& psi, double mu, int guard) {
    require_same_grid(r, psi);
    const auto& g = r.grid;
    const int k = g.first_positive();
    const double dx = g.dx();
    double worst = 0.0;
    for (int i = guard; i < g.n - guard; ++i) {
        if (i >= k - guard && i < k + guard) continue;
        const Complex d = (r.values[i + 1] - r.values[i - 1]) / (2.0 * dx);
        worst = std::max(worst, std::abs(d + mu * r.values[i] - psi.values[i]));
    }
    return worst;
}

Complex one_sided_trace(const WaveSample& phi, int side) {
    const int k = phi.grid.first_positive();
    Complex s = 0.0;
    for (int j = 0; j < 3; ++j) s += kTraceW[j] * phi.values[side < 0 ? k - 1 - j : k + j];
    return s;
}

Complex jump_ratio(const WaveSample& phi) {
    phi.grid.validate();
    const Complex left = one_sided_trace(phi, -1);
    if (std::abs(left) < 1e-12) throw PreconditionError("jump_ratio: left trace vanishes, ratio undefined");
    return one_sided_trace(phi, +1) / left;
}

Complex boundary_flux(const WaveSample& phi, const WaveSample& psi) {
    require_same_grid(phi, psi);
    return std::conj(one_sided_trace(phi, +1)) * one_sided_trace(psi, +1) -
           std::conj(one_sided_trace(phi, -1)) * one_sided_trace(psi, -1);
}

double symmetry_defect_1d(const WaveSample& phi, const WaveSample& psi, double lambda) {
    require_same_grid(phi, psi);
    phi.grid.validate();
    require_jump(phi, lambda, "phi");
    require_jump(psi, lambda, "psi");
    const int k = phi.grid.first_positive();
    const double dx = phi.grid.dx();
    // (phi, i D psi) - (i D phi, psi) = i [(phi, D psi) + (D phi, psi)]
    const Complex s = sbp_pairing(phi.values, psi.values, 0, k - 1, dx) +
                      sbp_pairing(phi.values, psi.values, k, phi.grid.n - 1, dx);
    return std::abs(kI * s);
}

}  // namespace qsde
