#include "qsde/fock_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qsde/errors.hpp"

namespace qsde {

namespace {

constexpr double kTraceW[3] = {1.875, -1.25, 0.375};
constexpr std::uint64_t kSampleSeed = 0x0f0c4b0d;

// A coordinate either at a regular point or at one side of the origin.
struct Coord {
    double tau = 0.0;
    int side = 0;  // 0: regular; -1 / +1: limit 0- / 0+
};

// Factor of phi~_{n,t} for one coordinate. `tside` selects the one-sided limit in t
// when t coincides with a breakpoint (+1: t -> t+, -1: t -> t-).
Complex integrand_factor(const Coord& c, double t, int tside, const SectorBoundary& sb,
                         const GaussianBathFunction& v) {
    bool inside;
    if (c.side != 0) {
        inside = c.side > 0 && (t > 0.0 || tside > 0);
    } else {
        inside = c.tau >= 0.0 && (c.tau < t || (c.tau == t && tside > 0));
    }
    const Complex val = v.time_value(c.tau - t);
    return inside ? sb.w * val + sb.l : val;
}

Complex integrand_product(const std::vector<Coord>& coords, double t, int tside, const SectorBoundary& sb,
                          const GaussianBathFunction& v, Complex h_weight) {
    Complex p = h_weight;
    for (const auto& c : coords) p *= integrand_factor(c, t, tside, sb, v);
    return p;
}

std::vector<Coord> regular_coords(const std::vector<double>& tau) {
    std::vector<Coord> out;
    out.reserve(tau.size());
    for (double x : tau) {
        if (x == 0.0) throw DomainError("coordinate on the hyperplane tau = 0; use the one-sided traces");
        out.push_back({x, 0});
    }
    return out;
}

std::vector<Coord> with_trace(const std::vector<double>& tau_rest, int k, Side side) {
    auto out = regular_coords(tau_rest);
    out.insert(out.begin() + k, Coord{0.0, side == Side::kLeft ? -1 : 1});
    return out;
}

void require_resolvent(double mu, const SectorBoundary& sb, const ResolventOptions& opt) {
    if (!(mu > 0.0)) throw InvalidInput("resolvent: mu must be positive");
    if (!((sb.g + mu).real() > 0.0)) throw InvalidInput("resolvent: Re(g + mu) must be positive");
    if (!(opt.T_max > 0.0) || opt.n_t_steps < 2) throw InvalidInput("resolvent: invalid quadrature options");
}

Complex resolvent_integral(const std::vector<Coord>& coords, double mu, const SectorBoundary& sb,
                           const GaussianBathFunction& v, const TimeFunction& vt, Complex h_weight,
                           const ResolventOptions& opt) {
    std::vector<double> br{0.0, opt.T_max};
    for (const auto& c : coords) {
        if (c.side == 0 && c.tau > 0.0 && c.tau < opt.T_max) br.push_back(c.tau);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());

    auto integrand = [&](double t, int tside) {
        const Complex expo = -(sb.g + mu) * t - sb.lstar_w * vt.integral(-t, 0.0);
        return std::exp(expo) * integrand_product(coords, t, tside, sb, v, h_weight);
    };
    Complex sum = 0.0;
    for (std::size_t s = 0; s + 1 < br.size(); ++s) {
        const double a = br[s], b = br[s + 1];
        const int m = std::max(2, static_cast<int>(std::ceil(opt.n_t_steps * (b - a) / opt.T_max)));
        const double h = (b - a) / m;
        Complex seg = 0.5 * (integrand(a, +1) + integrand(b, -1));
        for (int i = 1; i < m; ++i) seg += integrand(a + i * h, 0);
        sum += h * seg;
    }
    return sum;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Summation-by-parts weights: dx, halved at both ends of each half-line.
std::vector<double> sbp_weights(const LineGrid& g) {
    std::vector<double> h(g.n, g.dx());
    const int k = g.first_positive();
    for (int i : {0, k - 1, k, g.n - 1}) h[i] = 0.5 * g.dx();
    return h;
}

Complex factor_inner(const TracedFactor& a, const TracedFactor& b, const std::vector<double>& h) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * std::conj(a.samples[i]) * b.samples[i];
    return s;
}

Complex level_inner(const TruncatedFockVector& a, const TruncatedFockVector& b, int n,
                    const std::vector<double>& h) {
    Complex s = 0.0;
    for (const auto& x : a.components[n]) {
        for (const auto& y : b.components[n]) {
            Complex p = std::conj(x.coef) * y.coef;
            for (int k = 0; k < n && p != Complex{0.0, 0.0}; ++k) p *= factor_inner(x.factors[k], y.factors[k], h);
            s += p;
        }
    }
    return s / factorial(n);
}

Complex extrapolate(const std::vector<Complex>& s, int k, int side) {
    Complex out = 0.0;
    for (int j = 0; j < 3; ++j) out += kTraceW[j] * s[side < 0 ? k - 1 - j : k + j];
    return out;
}

// SBP first derivative on each half-line, never differencing across the origin.
TracedFactor derivative(const TracedFactor& f, const LineGrid& g) {
    const int n = g.n;
    const int k = g.first_positive();
    const double dx = g.dx();
    TracedFactor d;
    d.samples.resize(n);
    const auto& u = f.samples;
    for (int i = 0; i < n; ++i) {
        const bool start = (i == 0 || i == k);
        const bool end = (i == k - 1 || i == n - 1);
        if (start) d.samples[i] = (u[i + 1] - u[i]) / dx;
        else if (end) d.samples[i] = (u[i] - u[i - 1]) / dx;
        else d.samples[i] = (u[i + 1] - u[i - 1]) / (2.0 * dx);
    }
    d.left = extrapolate(d.samples, k, -1);
    d.right = extrapolate(d.samples, k, +1);
    return d;
}

std::vector<int> random_tuple(std::mt19937_64& rng, const LineGrid& g, int n) {
    // nodes drawn from the central half of the grid where the test vectors live
    std::uniform_int_distribution<int> pick(g.n / 4, 3 * g.n / 4 - 1);
    std::vector<int> idx(n);
    for (auto& i : idx) i = pick(rng);
    return idx;
}

double max_sample_norm(const TracedFactor& f) {
    double m = 0.0;
    for (const auto& z : f.samples) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------

SectorBoundary SectorBoundary::from_sector(const ScalarSector& s) { return {s.w(), s.l(), s.g(), s.lstar_w()}; }

void SectorBoundary::validate() const {
    if (std::abs(std::abs(w) - 1.0) > 1e-12) throw InvalidInput("SectorBoundary: |w| must be 1");
    if (std::abs(2.0 * g.real() - std::norm(l)) > 1e-10 * (1.0 + std::norm(l))) {
        throw InvalidInput("SectorBoundary: g + conj(g) must equal |l|^2");
    }
    if (std::abs(lstar_w - std::conj(l) * w) > 1e-12 * (1.0 + std::abs(l))) {
        throw InvalidInput("SectorBoundary: lstar_w must equal conj(l) w");
    }
}

Complex phi_tilde_eval(int n, double t, const std::vector<double>& tau, const SectorBoundary& sb,
                       const GaussianBathFunction& v, Complex h_weight) {
    if (static_cast<int>(tau.size()) != n) throw InvalidInput("phi_tilde_eval: need n coordinates");
    return integrand_product(regular_coords(tau), t, 0, sb, v, h_weight);
}

Complex phi_tilde_trace(int n, double t, int k, Side side, const std::vector<double>& tau_rest,
                        const SectorBoundary& sb, const GaussianBathFunction& v, Complex h_weight) {
    if (n < 1 || k < 0 || k >= n || static_cast<int>(tau_rest.size()) != n - 1) {
        throw InvalidInput("phi_tilde_trace: need 0 <= k < n and n - 1 remaining coordinates");
    }
    return integrand_product(with_trace(tau_rest, k, side), t, 0, sb, v, h_weight);
}

JumpResidualReport jump_residual_integrand(int n, double t, int k, const std::vector<double>& tau_rest,
                                           const SectorBoundary& sb, const GaussianBathFunction& v,
                                           Complex h_weight) {
    const Complex right = phi_tilde_trace(n, t, k, Side::kRight, tau_rest, sb, v, h_weight);
    const Complex left = phi_tilde_trace(n, t, k, Side::kLeft, tau_rest, sb, v, h_weight);
    const Complex lower = phi_tilde_eval(n - 1, t, tau_rest, sb, v, h_weight);
    const double scale = std::max({std::abs(right), std::abs(sb.w * left), std::abs(sb.l * lower)});
    return {n, k, std::abs(right - sb.w * left - sb.l * lower), scale};
}

ResolventValues resolvent_component(int n, double mu, const std::vector<std::vector<double>>& points,
                                    const SectorBoundary& sb, const GaussianBathFunction& v,
                                    Complex h_weight, const ResolventOptions& opt) {
    require_resolvent(mu, sb, opt);
    const TimeFunction vt = v.time_transform();
    ResolventValues out;
    out.values.reserve(points.size());
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != n) throw InvalidInput("resolvent_component: point of wrong size");
        out.values.push_back(resolvent_integral(regular_coords(p), mu, sb, v, vt, h_weight, opt));
    }
    // |phi~| <= |h| (sup|v~| + |l|)^n and the annihilation factor is bounded by e^{|l w| |v~|_1}
    const TimeTerm term = vt.terms().front();
    const double vmax = std::abs(term.coef);
    const double l1 = std::abs(term.coef) * std::sqrt(std::numbers::pi / term.rate);
    const double rate = (sb.g + mu).real();
    out.truncation_bound = std::abs(h_weight) * std::pow(vmax + std::abs(sb.l), n) *
                           std::exp(std::abs(sb.lstar_w) * l1 - rate * opt.T_max) / rate;
    return out;
}

JumpResidualReport resolvent_jump_residual(int n, double mu, int k, const std::vector<double>& tau_rest,
                                           const SectorBoundary& sb, const GaussianBathFunction& v,
                                           Complex h_weight, const ResolventOptions& opt) {
    require_resolvent(mu, sb, opt);
    if (n < 1 || k < 0 || k >= n || static_cast<int>(tau_rest.size()) != n - 1) {
        throw InvalidInput("resolvent_jump_residual: need 0 <= k < n and n - 1 remaining coordinates");
    }
    const TimeFunction vt = v.time_transform();
    const Complex right = resolvent_integral(with_trace(tau_rest, k, Side::kRight), mu, sb, v, vt, h_weight, opt);
    const Complex left = resolvent_integral(with_trace(tau_rest, k, Side::kLeft), mu, sb, v, vt, h_weight, opt);
    const Complex lower = resolvent_integral(regular_coords(tau_rest), mu, sb, v, vt, h_weight, opt);
    const double scale = std::max({std::abs(right), std::abs(sb.w * left), std::abs(sb.l * lower)});
    return {n, k, std::abs(right - sb.w * left - sb.l * lower), scale};
}

// ---------------------------------------------------------------------------

Complex TruncatedFockVector::value(int n, const std::vector<int>& idx) const {
    Complex s = 0.0;
    for (const auto& term : components[n]) {
        Complex p = term.coef;
        for (int k = 0; k < n; ++k) p *= term.factors[k].samples[idx[k]];
        s += p;
    }
    return s;
}

Complex TruncatedFockVector::trace(int n, int k, Side side, const std::vector<int>& idx_rest) const {
    Complex s = 0.0;
    for (const auto& term : components[n]) {
        Complex p = term.coef;
        for (int m = 0, r = 0; m < n; ++m) {
            if (m == k) {
                p *= side == Side::kLeft ? term.factors[m].left : term.factors[m].right;
            } else {
                p *= term.factors[m].samples[idx_rest[r++]];
            }
        }
        s += p;
    }
    return s;
}

Complex TruncatedFockVector::inner(const TruncatedFockVector& a, const TruncatedFockVector& b) {
    if (a.grid.n != b.grid.n || a.grid.x_min != b.grid.x_min || a.grid.x_max != b.grid.x_max) {
        throw InvalidInput("TruncatedFockVector::inner: different grids");
    }
    const auto h = sbp_weights(a.grid);
    const int top = std::min(a.n_max(), b.n_max());
    Complex s = 0.0;
    for (int n = 0; n <= top; ++n) s += level_inner(a, b, n, h);
    return s;
}

double TruncatedFockVector::norm() const { return std::sqrt(inner(*this, *this).real()); }

std::vector<double> TruncatedFockVector::level_norms2() const {
    const auto h = sbp_weights(grid);
    std::vector<double> out;
    for (int n = 0; n <= n_max(); ++n) out.push_back(std::abs(level_inner(*this, *this, n, h)));
    return out;
}

TruncatedFockVector build_jump_vector(int n_max, const SectorBoundary& sb,
                                      const std::vector<GaussianBathFunction>& seeds,
                                      const JumpVectorOptions& opt) {
    if (n_max < 0 || n_max > 3) throw InvalidInput("build_jump_vector: n_max must lie in 0..3");
    if (seeds.empty()) throw InvalidInput("build_jump_vector: need at least one seed");
    if (opt.gamma == Complex{0.0, 0.0}) throw InvalidInput("build_jump_vector: gamma must be non-zero");
    if (!(opt.edge_width > 0.0)) throw InvalidInput("build_jump_vector: edge_width must be positive");
    if (!opt.coefs.empty() && opt.coefs.size() != seeds.size()) {
        throw InvalidInput("build_jump_vector: one coefficient per seed required");
    }
    sb.validate();
    opt.grid.validate();
    const auto& g = opt.grid;
    const Complex w = opt.enforce_jump ? sb.w : Complex(1.0);
    const Complex lift = sb.l / opt.gamma;

    std::vector<TracedFactor> factors;
    for (const auto& seed : seeds) {
        seed.validate();
        TracedFactor f;
        f.samples.resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            const double tau = g.x(i);
            const Complex s = seed.time_value(tau);
            const double e = std::exp(-0.5 * tau * tau / (opt.edge_width * opt.edge_width));
            f.samples[i] = tau < 0.0 ? s : w * s + lift * e;
        }
        f.left = seed.time_value(0.0);
        f.right = w * f.left + lift;
        factors.push_back(std::move(f));
    }

    TruncatedFockVector psi{g, {}};
    psi.components.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        for (std::size_t j = 0; j < seeds.size(); ++j) {
            const Complex c = opt.coefs.empty() ? Complex(1.0) : opt.coefs[j];
            psi.components[n].push_back({c * std::pow(opt.gamma, n), std::vector<TracedFactor>(n, factors[j])});
        }
    }
    return psi;
}

std::vector<JumpResidualReport> vector_jump_residuals(const TruncatedFockVector& psi,
                                                      const SectorBoundary& sb, int n_samples) {
    std::mt19937_64 rng(kSampleSeed);
    std::vector<JumpResidualReport> out;
    for (int n = 1; n <= psi.n_max(); ++n) {
        for (int k = 0; k < n; ++k) {
            JumpResidualReport rep{n, k, 0.0, 0.0};
            for (int s = 0; s < n_samples; ++s) {
                const auto rest = random_tuple(rng, psi.grid, n - 1);
                const Complex right = psi.trace(n, k, Side::kRight, rest);
                const Complex left = psi.trace(n, k, Side::kLeft, rest);
                const Complex lower = psi.value(n - 1, rest);
                rep.residual_abs = std::max(rep.residual_abs, std::abs(right - sb.w * left - sb.l * lower));
                rep.scale = std::max({rep.scale, std::abs(right), std::abs(sb.w * left), std::abs(sb.l * lower)});
            }
            out.push_back(rep);
        }
    }
    return out;
}

double boundary_condition_defect(const TruncatedFockVector& psi, const SectorBoundary& sb, int n_samples) {
    std::mt19937_64 rng(kSampleSeed + 1);
    double worst = 0.0;
    for (int n = 0; n < psi.n_max(); ++n) {
        double res = 0.0, scale = 0.0;
        for (int s = 0; s < n_samples; ++s) {
            const auto idx = random_tuple(rng, psi.grid, n);
            Complex lhs = 0.0;
            for (int k = 0; k <= n; ++k) {
                const Complex right = psi.trace(n + 1, k, Side::kRight, idx);
                const Complex left = psi.trace(n + 1, k, Side::kLeft, idx);
                lhs += right - sb.w * left;
                scale = std::max({scale, std::abs(right), std::abs(left)});
            }
            lhs /= static_cast<double>(n + 1);
            res = std::max(res, std::abs(lhs - sb.l * psi.value(n, idx)));
        }
        if (scale > 0.0) worst = std::max(worst, res / scale);
    }
    return worst;
}

double trace_consistency(const TruncatedFockVector& psi) {
    const int k = psi.grid.first_positive();
    double worst = 0.0;
    for (const auto& level : psi.components) {
        for (const auto& term : level) {
            for (const auto& f : term.factors) {
                const double scale = std::max(max_sample_norm(f), 1e-300);
                worst = std::max(worst, std::abs(extrapolate(f.samples, k, -1) - f.left) / scale);
                worst = std::max(worst, std::abs(extrapolate(f.samples, k, +1) - f.right) / scale);
            }
        }
    }
    return worst;
}

double permutation_asymmetry(const TruncatedFockVector& psi, int n_samples) {
    std::mt19937_64 rng(kSampleSeed + 2);
    double worst = 0.0;
    for (int n = 2; n <= psi.n_max(); ++n) {
        double diff = 0.0, scale = 0.0;
        for (int s = 0; s < n_samples; ++s) {
            auto idx = random_tuple(rng, psi.grid, n);
            const Complex base = psi.value(n, idx);
            scale = std::max(scale, std::abs(base));
            auto swapped = idx;
            std::swap(swapped[0], swapped[1]);
            diff = std::max(diff, std::abs(psi.value(n, swapped) - base));
            std::rotate(idx.begin(), idx.begin() + 1, idx.end());
            diff = std::max(diff, std::abs(psi.value(n, idx) - base));
        }
        if (scale > 0.0) worst = std::max(worst, diff / scale);
    }
    return worst;
}

TruncatedFockVector apply_boundary_hamiltonian(const TruncatedFockVector& psi, const SectorBoundary& sb,
                                               bool check_jump) {
    sb.validate();
    if (check_jump) {
        for (const auto& rep : vector_jump_residuals(psi, sb, 16)) {
            if (rep.residual_abs > 1e-6 * rep.scale + 1e-14) {
                std::ostringstream os;
                os << "apply_boundary_hamiltonian: jump condition violated at n=" << rep.n << ", k=" << rep.k
                   << " (residual " << rep.residual_abs << ", scale " << rep.scale << ")";
                throw PreconditionError(os.str());
            }
        }
    }
    TruncatedFockVector out{psi.grid, {}};
    out.components.resize(psi.components.size());
    for (int n = 0; n <= psi.n_max(); ++n) {
        auto& dst = out.components[n];
        for (const auto& term : psi.components[n]) {
            dst.push_back({kI * sb.g * term.coef, term.factors});
            for (int k = 0; k < n; ++k) {
                ProductTerm d{kI * term.coef, term.factors};
                d.factors[k] = derivative(term.factors[k], psi.grid);
                dst.push_back(std::move(d));
            }
        }
        if (n < psi.n_max()) {
            // single insertion of the 0- trace: symmetric components make the slot irrelevant
            for (const auto& term : psi.components[n + 1]) {
                ProductTerm a{kI * sb.lstar_w * term.coef * term.factors[0].left,
                              std::vector<TracedFactor>(term.factors.begin() + 1, term.factors.end())};
                dst.push_back(std::move(a));
            }
        }
    }
    return out;
}

PairingReport pairing_defect(const TruncatedFockVector& phi, const TruncatedFockVector& psi,
                             const SectorBoundary& sb, bool check_jump) {
    if (phi.n_max() != psi.n_max()) throw InvalidInput("pairing_defect: vectors truncated at different levels");
    const auto hphi = apply_boundary_hamiltonian(phi, sb, check_jump);
    const auto hpsi = apply_boundary_hamiltonian(psi, sb, check_jump);
    PairingReport rep;
    const Complex d = TruncatedFockVector::inner(phi, hpsi) - TruncatedFockVector::inner(hphi, psi);
    rep.defect = std::abs(d);
    rep.scale = phi.norm() * hpsi.norm() + hphi.norm() * psi.norm();
    rep.normalized = rep.scale > 0.0 ? rep.defect / rep.scale : rep.defect;
    const auto h = sbp_weights(phi.grid);
    const Complex residue = kI * 2.0 * sb.g.real() * level_inner(phi, psi, psi.n_max(), h);
    rep.truncation = std::abs(residue);
    rep.discretization = std::abs(d - residue);
    return rep;
}

}  // namespace qsde
