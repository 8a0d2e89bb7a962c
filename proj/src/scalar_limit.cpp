#include "qsde/scalar_limit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qsde/errors.hpp"

namespace qsde {

namespace {

// Kernel samples below this fraction of the peak are dropped from the convolution.
constexpr double kKernelCut = 1e-18;
// Gaussian envelopes are treated as zero beyond exp(-45).
constexpr double kEnvelopeLog = 45.0;

void require_grid(double alpha, double T, int n_steps) {
    if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
    if (!(T > 0.0)) throw InvalidInput("time horizon must be positive");
    if (n_steps < 1) throw InvalidInput("n_steps must be positive");
    const double dt = T / n_steps;
    if (dt > 0.25 * alpha) {
        std::ostringstream os;
        os << "time step " << dt << " does not resolve kernel width " << alpha
           << "; increase n_steps to at least " << recommended_steps(alpha, T);
        throw ResolutionError(os.str());
    }
}

std::vector<Complex> sample_overlap(const GaussianBathFunction& u, const GaussianBathFunction& v,
                                    double dt, int n) {
    std::vector<Complex> out(n + 1);
    for (int m = 0; m <= n; ++m) out[m] = overlap(u, v, m * dt);
    return out;
}

std::size_t kernel_support(const std::vector<Complex>& k) {
    double peak = 0.0;
    for (const auto& z : k) peak = std::max(peak, std::abs(z));
    std::size_t last = 0;
    for (std::size_t m = 0; m < k.size(); ++m) {
        if (std::abs(k[m]) > kKernelCut * peak) last = m;
    }
    return last;
}

// b_n = F_n + c \int_0^{t_n} K(t_n - s) b_s ds, trapezoid rule, kernel truncated at `cut`.
std::vector<Complex> volterra(const std::vector<Complex>& F, const std::vector<Complex>& K, Complex c,
                              double dt) {
    const std::size_t n = F.size();
    const std::size_t cut = kernel_support(K);
    std::vector<Complex> b(n);
    b[0] = F[0];
    const Complex denom = 1.0 - 0.5 * c * dt * K[0];
    for (std::size_t i = 1; i < n; ++i) {
        Complex acc = 0.0;
        if (i <= cut) acc += 0.5 * K[i] * b[0];
        const std::size_t j0 = i > cut ? i - cut : 1;
        for (std::size_t j = j0; j < i; ++j) acc += K[i - j] * b[j];
        b[i] = (F[i] + c * dt * acc) / denom;
    }
    return b;
}

Complex trapezoid(const std::vector<Complex>& y, double dt) {
    Complex s = 0.0;
    for (const auto& z : y) s += z;
    return dt * (s - 0.5 * (y.front() + y.back()));
}

std::vector<Complex> running_trapezoid(const std::vector<Complex>& y, double dt) {
    std::vector<Complex> c(y.size());
    c[0] = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) c[i] = c[i - 1] + 0.5 * dt * (y[i - 1] + y[i]);
    return c;
}

VolterraSolution make_solution(double dt, std::vector<Complex> samples) {
    VolterraSolution out;
    out.dt = dt;
    out.t_grid.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) out.t_grid[i] = i * dt;
    out.cumulative = running_trapezoid(samples, dt);
    out.samples = std::move(samples);
    return out;
}

std::array<Complex, 5> as_array(const PrelimitQuantities& q) { return {q.q0, q.q1, q.q2, q.q3, q.q4}; }

PrelimitQuantities richardson(const PrelimitQuantities& coarse, const PrelimitQuantities& fine) {
    const auto c = as_array(coarse);
    const auto f = as_array(fine);
    std::array<Complex, 5> r;
    for (int i = 0; i < 5; ++i) r[i] = (4.0 * f[i] - c[i]) / 3.0;
    return {r[0], r[1], r[2], r[3], r[4]};
}

double max_change(const PrelimitQuantities& a, const PrelimitQuantities& b) {
    const auto x = as_array(a);
    const auto y = as_array(b);
    double m = 0.0;
    for (int i = 0; i < 5; ++i) m = std::max(m, std::abs(x[i] - y[i]) / std::max(1.0, std::abs(y[i])));
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------

ScalarSector ScalarSector::from_values(Complex h, Complex k, Complex r) {
    return {h.real(), k.real(), std::abs(r), std::arg(r)};
}

Complex ScalarSector::r() const { return std::polar(rho, phi); }
Complex ScalarSector::w() const { return Complex(2.0, kappa) / Complex(2.0, -kappa); }
Complex ScalarSector::l() const { return 2.0 * kI * r() / Complex(2.0, -kappa); }
Complex ScalarSector::g() const { return Complex(0.0, -nu) + rho * rho / Complex(2.0, -kappa); }
Complex ScalarSector::lstar_w() const { return std::conj(l()) * w(); }

std::vector<CoefficientSector> coefficient_sectors(const SymmetricCoefficients& c) {
    c.validate();
    const std::array<ComplexMatrix, 3> family{c.h, c.k, c.r};
    const auto sectors = joint_diagonalize(family);
    std::vector<CoefficientSector> out;
    out.reserve(sectors.sectors.size());
    for (const auto& s : sectors.sectors) {
        out.push_back({s.projector, ScalarSector::from_values(s.values[0], s.values[1], s.values[2])});
    }
    return out;
}

Complex overlap_kernel(const GaussianBathFunction& u, const GaussianBathFunction& v, double alpha,
                       double s) {
    if (!(alpha > 0.0)) throw InvalidInput("overlap_kernel: alpha must be positive");
    return overlap(u.scaled(alpha), v.scaled(alpha), s);
}

int recommended_steps(double alpha, double T) {
    return std::max(64, static_cast<int>(std::ceil(8.0 * T / alpha - 1e-9)));
}

VolterraSolution solve_volterra_a(double alpha, double kappa, double T, int n_steps,
                                  const GaussianBathFunction& coupling) {
    require_grid(alpha, T, n_steps);
    const double dt = T / n_steps;
    const auto f = coupling.scaled(alpha);
    const auto k = sample_overlap(f, f, dt, n_steps);
    return make_solution(dt, volterra(k, k, kI * kappa, dt));
}

VolterraSolution pairing_evolution(const GaussianBathFunction& u, const GaussianBathFunction& v,
                                   const ScalarSector& sector, double alpha, double T, int n_steps,
                                   const GaussianBathFunction& coupling) {
    require_grid(alpha, T, n_steps);
    const double dt = T / n_steps;
    const auto f = coupling.scaled(alpha);
    const Complex c = kI * sector.kappa;
    const auto kff = sample_overlap(f, f, dt, n_steps);
    const auto b = volterra(sample_overlap(f, v, dt, n_steps), kff, c, dt);
    const auto ku = sample_overlap(u, f, dt, n_steps);

    std::vector<Complex> y(n_steps + 1);
    for (int n = 0; n <= n_steps; ++n) {
        Complex acc = 0.0;
        if (n > 0) {
            acc = 0.5 * (ku[n] * b[0] + ku[0] * b[n]);
            for (int j = 1; j < n; ++j) acc += ku[n - j] * b[j];
        }
        y[n] = overlap(u, v, n * dt) + c * dt * acc;
    }
    return make_solution(dt, std::move(y));
}

PrelimitQuantities prelimit_quantities(const GaussianBathFunction& v2, const GaussianBathFunction& v1,
                                       double kappa, double alpha, double t, int n_steps,
                                       const GaussianBathFunction& coupling) {
    require_grid(alpha, t, n_steps);
    const double dt = t / n_steps;
    const int n = n_steps;
    const auto f = coupling.scaled(alpha);
    const Complex c = kI * kappa;

    const auto kff = sample_overlap(f, f, dt, n);
    const auto a = volterra(kff, kff, c, dt);
    const auto b1 = volterra(sample_overlap(f, v1, dt, n), kff, c, dt);
    const auto k2 = sample_overlap(v2, f, dt, n);
    const auto k2_int = running_trapezoid(k2, dt);

    PrelimitQuantities q;
    q.q0 = trapezoid(a, dt);
    q.q3 = trapezoid(b1, dt);

    std::vector<Complex> tmp(n + 1);
    for (int j = 0; j <= n; ++j) tmp[j] = (t - j * dt) * a[j];
    q.q4 = trapezoid(tmp, dt);

    // \int_0^t (v2, P_s f) ds = \int_0^t k2 + i kappa \int_0^t a_r \int_0^{t-r} k2
    for (int j = 0; j <= n; ++j) tmp[j] = a[j] * k2_int[n - j];
    q.q2 = k2_int[n] + c * trapezoid(tmp, dt);

    for (int j = 0; j <= n; ++j) tmp[j] = k2[n - j] * b1[j];
    q.q1 = overlap(v2, v1, t) + c * trapezoid(tmp, dt);
    return q;
}

RefinedQuantities refined_prelimit_quantities(const GaussianBathFunction& v2,
                                              const GaussianBathFunction& v1, double kappa,
                                              double alpha, double t, const RefinementOptions& opt,
                                              const GaussianBathFunction& coupling) {
    int n = recommended_steps(alpha, t);
    auto eval = [&](int steps) { return prelimit_quantities(v2, v1, kappa, alpha, t, steps, coupling); };
    PrelimitQuantities coarse = eval(n);
    n *= 2;
    PrelimitQuantities fine = eval(n);
    PrelimitQuantities extrap = richardson(coarse, fine);
    double change = 0.0;
    while (true) {
        if (2 * n > opt.max_steps) {
            std::ostringstream os;
            os << "refined_prelimit_quantities: no convergence to " << opt.tol << " within "
               << opt.max_steps << " steps (alpha=" << alpha << ", last change " << change
               << "); increase max_steps";
            throw ResolutionError(os.str());
        }
        n *= 2;
        coarse = fine;
        fine = eval(n);
        const auto next = richardson(coarse, fine);
        change = max_change(next, extrap);
        extrap = next;
        if (change < opt.tol) break;
    }
    return {extrap, n, change};
}

Complex prelimit_matrix_element(const SymmetricCoefficients& coeffs, const ComplexVector& h2,
                                const GaussianBathFunction& v2, const ComplexVector& h1,
                                const GaussianBathFunction& v1, double t, double alpha, int n_steps) {
    if (h1.size() != coeffs.dim() || h2.size() != coeffs.dim()) {
        throw InvalidInput("prelimit_matrix_element: system vectors do not match the coefficient dimension");
    }
    const auto sectors = coefficient_sectors(coeffs);
    if (t == 0.0) return h2.dot(h1) * std::exp(overlap(v2, v1, 0.0));
    Complex total = 0.0;
    for (const auto& s : sectors) {
        const Complex weight = h2.dot(s.projector * h1);
        if (weight == Complex{0.0, 0.0}) continue;
        const auto& sc = s.scalar;
        const auto q = richardson(
            prelimit_quantities(v2, v1, sc.kappa, alpha, t, n_steps),
            prelimit_quantities(v2, v1, sc.kappa, alpha, t, 2 * n_steps));
        const Complex r = sc.r();
        const Complex expo = kI * sc.nu * t + q.q1 + kI * r * q.q2 + kI * std::conj(r) * q.q3 -
                             sc.rho * sc.rho * q.q4;
        total += weight * std::exp(expo);
    }
    return total;
}

EvolvedProfileReport evolved_profile_report(const GaussianBathFunction& v, double kappa, double alpha,
                                            double t, int n_steps,
                                            const GaussianBathFunction& coupling) {
    v.validate();
    if (n_steps <= 0) n_steps = 2 * recommended_steps(alpha, t);
    require_grid(alpha, t, n_steps);
    const double dt = t / n_steps;
    const auto f = coupling.scaled(alpha);
    const Complex c = kI * kappa;
    const Complex w = Complex(2.0, kappa) / Complex(2.0, -kappa);

    const auto kff = sample_overlap(f, f, dt, n_steps);
    const auto b = volterra(sample_overlap(f, v, dt, n_steps), kff, c, dt);

    const TimeTerm ft = f.time_transform().terms().front();
    const TimeTerm vt = v.time_transform().terms().front();
    const double wf = std::sqrt(kEnvelopeLog / ft.rate);
    const double wv = std::sqrt(kEnvelopeLog / vt.rate);

    const double lo = std::min(vt.center + t - wv, ft.center - wf);
    const double hi = std::max(vt.center + t + wv, t + ft.center + wf);
    const double h = std::min(alpha, 1.0 / std::sqrt(2.0 * vt.rate)) / 16.0;
    const int n_tau = static_cast<int>(std::ceil((hi - lo) / h));
    const double step = (hi - lo) / n_tau;

    double dist2 = 0.0, norm2 = 0.0;
    for (int i = 0; i < n_tau; ++i) {
        const double tau = lo + (i + 0.5) * step;
        // f~(tau - t + r) is negligible unless |tau - t + r - center| <= wf
        const double r_lo = std::max(0.0, t - tau + ft.center - wf);
        const double r_hi = std::min(t, t - tau + ft.center + wf);
        Complex acc = 0.0;
        if (r_hi >= r_lo) {
            const int j0 = static_cast<int>(std::floor(r_lo / dt));
            const int j1 = std::min(n_steps, static_cast<int>(std::ceil(r_hi / dt)));
            for (int j = j0; j <= j1; ++j) {
                const double wgt = (j == 0 || j == n_steps) ? 0.5 : 1.0;
                acc += wgt * f.time_value(tau - t + j * dt) * b[j];
            }
        }
        const Complex free = v.time_value(tau - t);
        const Complex evolved = free + c * dt * acc;
        const Complex target = (tau > 0.0 && tau < t) ? w * free : free;
        dist2 += std::norm(evolved - target);
        norm2 += std::norm(evolved);
    }
    dist2 *= step;
    norm2 *= step;
    const double v2 = v.norm2();
    return {std::sqrt(dist2 / v2), std::abs(norm2 / v2 - 1.0), n_steps, n_tau};
}

namespace {

// log|c_t|^2 + |x_t|^2 - |v|^2 on a single grid (signed).
std::pair<double, double> norm_identity_on_grid(const GaussianBathFunction& v, const ScalarSector& sc,
                                                double alpha, double t, int n_steps,
                                                const GaussianBathFunction& coupling) {
    require_grid(alpha, t, n_steps);
    const double dt = t / n_steps;
    const auto f = coupling.scaled(alpha);
    const Complex c = kI * sc.kappa;
    const Complex r = sc.r();

    const auto kff = sample_overlap(f, f, dt, n_steps);
    const auto a = volterra(kff, kff, c, dt);
    const auto b = volterra(sample_overlap(f, v, dt, n_steps), kff, c, dt);
    std::vector<Complex> tmp(n_steps + 1);
    for (int j = 0; j <= n_steps; ++j) tmp[j] = (t - j * dt) * a[j];
    const Complex q3 = trapezoid(b, dt);
    const Complex q4 = trapezoid(tmp, dt);

    const TimeTerm ft = f.time_transform().terms().front();
    const TimeTerm vt = v.time_transform().terms().front();
    const double wf = std::sqrt(kEnvelopeLog / ft.rate);
    const double wv = std::sqrt(kEnvelopeLog / vt.rate);
    // antiderivative of f~ from -infinity
    auto fcum = [&](double x) {
        if (x <= ft.center - wf) return Complex(0.0, 0.0);
        return gaussian_window_integral(ft.coef, ft.rate, ft.center, ft.freq, -kInf,
                                        std::min(x, ft.center + wf));
    };
    const Complex fmass = fcum(kInf);

    // suffix sums of trapezoid-weighted a: tail[j] = sum_{i >= j} w_i a_i
    std::vector<Complex> tail(n_steps + 2, 0.0);
    for (int j = n_steps; j >= 0; --j) {
        const double wgt = (j == 0 || j == n_steps) ? 0.5 : 1.0;
        tail[j] = tail[j + 1] + wgt * a[j];
    }

    const double lo = std::min(vt.center + t - wv, ft.center - wf);
    const double hi = std::max(vt.center + t + wv, t + ft.center + wf);
    const double h = std::min(alpha, 1.0 / std::sqrt(2.0 * vt.rate)) / 16.0;
    const int n_tau = static_cast<int>(std::ceil((hi - lo) / h));
    const double step = (hi - lo) / n_tau;

    double x2 = 0.0;
    for (int i = 0; i < n_tau; ++i) {
        const double tau = lo + (i + 0.5) * step;
        const double r_lo = std::max(0.0, t - tau + ft.center - wf);
        const double r_hi = std::min(t, t - tau + ft.center + wf);
        // P_t v
        Complex pv = 0.0;
        // \int_0^t P_s f ds = F(tau) - F(tau - t) + i kappa \int_0^t a_r [F(tau) - F(tau - t + r)] dr
        const Complex f_tau = fcum(tau);
        Complex conv = f_tau * tail[0];
        if (r_hi >= r_lo) {
            const int j0 = static_cast<int>(std::floor(r_lo / dt));
            const int j1 = std::min(n_steps, static_cast<int>(std::ceil(r_hi / dt)));
            for (int j = j0; j <= j1; ++j) {
                const double wgt = (j == 0 || j == n_steps) ? 0.5 : 1.0;
                pv += wgt * f.time_value(tau - t + j * dt) * b[j];
                conv -= wgt * a[j] * fcum(tau - t + j * dt);
            }
            conv -= fmass * tail[j1 + 1];
        } else if (t - tau + ft.center + wf < 0.0) {
            conv -= fmass * tail[0];  // every shifted argument lies past the support
        }
        pv = v.time_value(tau - t) + c * dt * pv;
        const Complex sf = f_tau - fcum(tau - t) + c * dt * conv;
        x2 += std::norm(pv + kI * r * sf);
    }
    x2 *= step;
    const double log_c2 = 2.0 * (kI * std::conj(r) * q3 - sc.rho * sc.rho * q4).real();
    return {log_c2 + x2 - v.norm2(), x2};
}

}  // namespace

PrelimitNormReport prelimit_norm_identity(const GaussianBathFunction& v, const ScalarSector& sector,
                                          double alpha, double t, int n_steps,
                                          const GaussianBathFunction& coupling) {
    v.validate();
    if (n_steps <= 0) n_steps = 2 * recommended_steps(alpha, t);
    const auto coarse = norm_identity_on_grid(v, sector, alpha, t, n_steps, coupling);
    const auto fine = norm_identity_on_grid(v, sector, alpha, t, 2 * n_steps, coupling);
    const double extrap = (4.0 * fine.first - coarse.first) / 3.0;
    return {std::abs(extrap), fine.second, 2 * n_steps};
}

std::vector<FourLimitsRow> four_limits_report(const std::vector<double>& alpha_schedule, double kappa,
                                              double t, const GaussianBathFunction& v,
                                              const RefinementOptions& opt) {
    if (alpha_schedule.empty()) throw InvalidInput("four_limits_report: empty alpha schedule");
    for (std::size_t i = 0; i < alpha_schedule.size(); ++i) {
        if (!(alpha_schedule[i] > 0.0)) throw InvalidInput("four_limits_report: alpha must be positive");
        if (i > 0 && !(alpha_schedule[i] < alpha_schedule[i - 1])) {
            throw InvalidInput("four_limits_report: alpha schedule must be decreasing");
        }
    }
    if (!(t > 0.0)) throw InvalidInput("four_limits_report: t must be positive");
    v.validate();

    const Complex inv = 1.0 / Complex(2.0, -kappa);
    const TimeFunction vt = v.time_transform();
    const Complex lim1 = inv;
    const Complex lim2 = 2.0 * inv * std::conj(vt.integral(0.0, t));
    const Complex lim3 = 2.0 * inv * vt.integral(-t, 0.0);

    std::vector<FourLimitsRow> rows;
    for (double alpha : alpha_schedule) {
        const auto rq = refined_prelimit_quantities(v, v, kappa, alpha, t, opt);
        const double tol = rq.change;
        auto row = [&](int id, Complex value, Complex limit, double tolerance) {
            rows.push_back({alpha, kappa, id, value, limit, std::abs(value - limit), tolerance});
        };
        row(1, rq.value.q0, lim1, tol);
        row(2, rq.value.q2, lim2, tol);
        row(3, rq.value.q3, lim3, tol);
        const int n = 2 * recommended_steps(alpha, t);
        const auto coarse = evolved_profile_report(v, kappa, alpha, t, n);
        const auto fine = evolved_profile_report(v, kappa, alpha, t, 2 * n);
        row(4, fine.distance, 0.0, std::abs(fine.distance - coarse.distance));
    }
    return rows;
}

bool tail_non_increasing(const std::vector<FourLimitsRow>& rows, int quantity_id, int tail) {
    std::vector<const FourLimitsRow*> sel;
    for (const auto& r : rows) {
        if (r.quantity_id == quantity_id) sel.push_back(&r);
    }
    if (sel.size() < 2) return true;
    const std::size_t start = sel.size() > static_cast<std::size_t>(tail) ? sel.size() - tail : 0;
    for (std::size_t i = start + 1; i < sel.size(); ++i) {
        const double slack = sel[i]->tolerance + sel[i - 1]->tolerance;
        if (sel[i]->abs_error > sel[i - 1]->abs_error + slack) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

CoherentState CoherentState::make(const ComplexVector& h, const TimeFunction& x) {
    CoherentState s;
    s.terms.push_back({1.0, h, x, -1});
    return s;
}

CoherentState CoherentState::make(const ComplexVector& h, const GaussianBathFunction& v) {
    return make(h, v.time_transform());
}

Complex CoherentState::inner(const CoherentState& a, const CoherentState& b) {
    Complex sum = 0.0;
    for (const auto& x : a.terms) {
        for (const auto& y : b.terms) {
            if (x.sector >= 0 && y.sector >= 0 && x.sector != y.sector) continue;
            const Complex hh = x.h.dot(y.h);
            if (hh == Complex{0.0, 0.0}) continue;
            sum += std::conj(x.weight) * y.weight * hh * std::exp(TimeFunction::inner(x.x, y.x));
        }
    }
    return sum;
}

LimitGroup::LimitGroup(const SymmetricCoefficients& coeffs) : sectors_(coefficient_sectors(coeffs)) {}

template <class Step>
CoherentState LimitGroup::apply(const CoherentState& psi, Step&& step) const {
    CoherentState out;
    for (const auto& term : psi.terms) {
        for (std::size_t s = 0; s < sectors_.size(); ++s) {
            if (term.sector >= 0 && term.sector != static_cast<int>(s)) continue;
            ComplexVector hs = term.sector >= 0 ? term.h : ComplexVector(sectors_[s].projector * term.h);
            if (term.sector < 0 && hs.norm() <= 1e-14 * term.h.norm()) continue;
            auto [factor, x] = step(sectors_[s].scalar, term.x);
            out.terms.push_back({term.weight * factor, std::move(hs), std::move(x), static_cast<int>(s)});
        }
    }
    return out;
}

CoherentState LimitGroup::evolve(const CoherentState& psi, double t) const {
    if (!(t >= 0.0)) throw InvalidInput("LimitGroup::evolve: t must be non-negative");
    if (t == 0.0) return psi;
    return apply(psi, [t](const ScalarSector& sc, const TimeFunction& x) {
        const Complex factor = std::exp(-sc.g() * t - sc.lstar_w() * x.integral(-t, 0.0));
        TimeFunction y = x.shifted(t).masked(0.0, t, sc.w());
        if (sc.l() != Complex{0.0, 0.0}) y = y + TimeFunction::indicator(0.0, t, sc.l());
        return std::pair{factor, y};
    });
}

CoherentState LimitGroup::cocycle(const CoherentState& psi, double a, double b) const {
    if (!(b >= a)) throw InvalidInput("LimitGroup::cocycle: interval end precedes start");
    if (a == b) return psi;
    return apply(psi, [a, b](const ScalarSector& sc, const TimeFunction& x) {
        const Complex factor = std::exp(-sc.g() * (b - a) - sc.lstar_w() * x.integral(a, b));
        TimeFunction y = x.masked(a, b, sc.w());
        if (sc.l() != Complex{0.0, 0.0}) y = y + TimeFunction::indicator(a, b, sc.l());
        return std::pair{factor, y};
    });
}

CoherentState LimitGroup::shift(const CoherentState& psi, double s) {
    CoherentState out = psi;
    for (auto& term : out.terms) term.x = term.x.shifted(s);
    return out;
}

Complex limit_matrix_element(const SymmetricCoefficients& coeffs, const ComplexVector& h2,
                             const GaussianBathFunction& v2, const ComplexVector& h1,
                             const GaussianBathFunction& v1, double t) {
    const LimitGroup group(coeffs);
    return CoherentState::inner(CoherentState::make(h2, v2),
                                group.evolve(CoherentState::make(h1, v1), t));
}

Complex cocycle_element(double a, double b, const SymmetricCoefficients& coeffs,
                        const ComplexVector& h2, const TimeFunction& x2, const ComplexVector& h1,
                        const TimeFunction& x1) {
    if (!(b >= a)) throw InvalidInput("cocycle_element: interval end precedes start");
    const LimitGroup group(coeffs);
    return CoherentState::inner(CoherentState::make(h2, x2),
                                group.cocycle(CoherentState::make(h1, x1), a, b));
}

Complex cocycle_element(double a, double b, const SymmetricCoefficients& coeffs,
                        const ComplexVector& h2, const GaussianBathFunction& v2,
                        const ComplexVector& h1, const GaussianBathFunction& v1) {
    return cocycle_element(a, b, coeffs, h2, v2.time_transform(), h1, v1.time_transform());
}

}  // namespace qsde
