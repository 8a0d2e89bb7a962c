#include <doctest.h>

#include <numbers>

#include "qsde/errors.hpp"
#include "qsde/scalar_limit.hpp"
#include "test_util.hpp"

using namespace qsde;

TEST_CASE("scalar sector identities") {
    for (const ScalarSector s : {ScalarSector{0.3, 2.0, 1.0, 0.4}, ScalarSector{-1.0, -0.7, 2.5, 2.0},
                                 ScalarSector{0.0, 0.0, 0.0, 0.0}}) {
        CHECK(std::abs(std::abs(s.w()) - 1.0) < 1e-14);
        CHECK(std::abs(s.g().real() - 2 * s.rho * s.rho / (4 + s.kappa * s.kappa)) < 1e-14);
        CHECK(std::abs(std::norm(s.l()) - 2 * s.g().real()) < 1e-12);
    }
    CHECK(std::abs(ScalarSector{0, 2, 0, 0}.w() - kI) < 1e-15);
}

TEST_CASE("overlap kernel closed form") {
    const auto f = GaussianBathFunction::standard();
    CHECK(std::abs(overlap_kernel(f, f, 1.0, 0.0) - 1.0 / (2 * std::sqrt(std::numbers::pi))) < 1e-15);
    CHECK(std::abs(overlap_kernel(f, f, 1.0, 50.0)) < 1e-100);
    for (double a : {0.3, 0.05}) {
        const double s = 0.7 * a;
        const Complex expect = std::exp(-s * s / (4 * a * a)) / (2 * std::sqrt(std::numbers::pi) * a);
        CHECK(std::abs(overlap_kernel(f, f, a, s) - expect) < 1e-12 * std::abs(expect));
        // total mass 1
        double mass = 0;
        const double h = a / 50;
        for (int i = -4000; i <= 4000; ++i) mass += overlap_kernel(f, f, a, i * h).real() * h;
        CHECK(std::abs(mass - 1.0) < 1e-10);
    }
}

TEST_CASE("Volterra solver") {
    const double alpha = 0.05, T = 1.0;
    const int n = recommended_steps(alpha, T);
    const auto free = solve_volterra_a(alpha, 0.0, T, n);
    const auto f = GaussianBathFunction::standard();
    for (std::size_t i = 0; i < free.samples.size(); i += 37)
        CHECK(std::abs(free.samples[i] - overlap_kernel(f, f, alpha, free.t_grid[i])) < 1e-15);
    CHECK(free.cumulative.front() == Complex(0.0, 0.0));
    CHECK_THROWS_AS(solve_volterra_a(alpha, 1.0, T, 4), ResolutionError);

    const auto r = refined_prelimit_quantities(f, f, 2.0, 0.01, 1.0);
    CHECK(std::abs(r.value.q0 - 1.0 / Complex(2.0, -2.0)) <= 0.02);
    const auto r0 = refined_prelimit_quantities(f, f, 0.0, 0.01, 1.0);
    CHECK(std::abs(r0.value.q0 - 0.5) <= 0.01);
}

TEST_CASE("pairing evolution: free case and unitarity") {
    const GaussianBathFunction u{Complex(1.0, 0.0), 0.0, 1.0, 0.2}, v{Complex(0.5, 0.3), 0.0, 1.5, -0.4};
    const double alpha = 0.1, T = 1.0;
    const auto p = pairing_evolution(u, v, ScalarSector{0, 0, 1, 0}, alpha, T, recommended_steps(alpha, T));
    CHECK(std::abs(p.samples.back() - overlap(u, v, T)) < 1e-12);

    const auto rep = evolved_profile_report(GaussianBathFunction{1.0, 0.0, 4.0, -0.5}, 2.0, 0.03, 1.0);
    CHECK(rep.norm_defect <= 1e-6);
}

TEST_CASE("prelimit matrix element special cases") {
    const GaussianBathFunction v1{Complex(0.6, 0.1), 0.2, 1.0, 0.1}, v2{Complex(0.3, -0.2), -0.1, 1.3, 0.4};
    ComplexVector h1(2), h2(2);
    h1 << Complex(1, 0), Complex(0.5, 0.5);
    h2 << Complex(0.2, 0.1), Complex(1, 0);
    SymmetricCoefficients free{ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)};
    free.h(0, 0) = 0.7;
    free.h(1, 1) = -0.4;
    const double t = 0.8;
    const Complex got = prelimit_matrix_element(free, h2, v2, h1, v1, t, 0.1, recommended_steps(0.1, t));
    Complex expect = 0;
    expect += std::exp(kI * 0.7 * t) * std::conj(h2(0)) * h1(0);
    expect += std::exp(-kI * 0.4 * t) * std::conj(h2(1)) * h1(1);
    expect *= std::exp(overlap(v2, v1, t));
    CHECK(std::abs(got - expect) < 1e-10);

    const auto c = testing::scalar_coeffs(0.3, 2.0, 1.0);
    const ComplexVector one = ComplexVector::Ones(1);
    const Complex lim0 = limit_matrix_element(c, one, v2, one, v1, 0.0);
    CHECK(std::abs(lim0 - std::exp(overlap(v2, v1, 0.0))) < 1e-14);

    std::mt19937_64 rng(31);
    const auto nc = testing::random_symmetric(rng, 2, false);
    const SymmetricCoefficients normal_nc{nc.h, nc.k, testing::random_hermitian(rng, 2)};
    CHECK_THROWS_AS(prelimit_matrix_element(normal_nc, h2, v2, h1, v1, t, 0.1, 200), NotCommuting);
    CHECK_THROWS_AS(prelimit_matrix_element(nc, h2, v2, h1, v1, t, 0.1, 200), InvalidInput);  // R not normal
}

TEST_CASE("prelimit norm identity and convergence to the limit") {
    const ScalarSector sc{0.3, 2.0, 1.0, 0.4};
    const auto rep = prelimit_norm_identity(GaussianBathFunction{Complex(0.5, 0.2), 0.0, 2.0, -0.3}, sc, 0.03, 1.0);
    CHECK(rep.log_norm_defect <= 1e-6);

    const auto c = testing::scalar_coeffs(0.0, 2.0, 1.0);
    const ComplexVector one = ComplexVector::Ones(1);
    const auto v1 = GaussianBathFunction::standard();
    const GaussianBathFunction v2{Complex(0.3, 0.1), 0.5, 1.2, 0.3};
    const Complex lim = limit_matrix_element(c, one, v2, one, v1, 1.0);
    double prev = 1e300;
    for (double a : {0.3, 0.1, 0.03, 0.01}) {
        const Complex pre = prelimit_matrix_element(c, one, v2, one, v1, 1.0, a, 2 * recommended_steps(a, 1.0));
        const double err = std::abs(pre - lim);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 0.01);
}

TEST_CASE("limit group: unitarity, group law, cocycle") {
    std::mt19937_64 rng(32);
    const auto coeffs = testing::random_symmetric(rng, 3, true);
    const LimitGroup grp(coeffs);
    ComplexVector h(3), k(3);
    h << Complex(1, 0), Complex(0.2, 0.3), Complex(-0.4, 0.1);
    k << Complex(0.3, 0), Complex(1, -0.2), Complex(0.1, 0.1);
    const GaussianBathFunction v1{Complex(0.8, 0.1), 0.2, 1.1, -0.3}, v2{Complex(0.4, -0.3), -0.1, 0.9, 0.5};
    const auto psi = CoherentState::make(h, v1), phi = CoherentState::make(k, v2);

    const auto ev = grp.evolve(psi, 0.7);
    CHECK(std::abs(ev.norm2() - psi.norm2()) <= 1e-10 * psi.norm2());

    const double t = 0.4, s = 0.9;
    const Complex a = CoherentState::inner(phi, grp.evolve(grp.evolve(psi, s), t));
    const Complex b = CoherentState::inner(phi, grp.evolve(psi, t + s));
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));

    // u(0, 2) = u(1, 2) u(0, 1)
    const Complex c2 = CoherentState::inner(phi, grp.cocycle(psi, 0.0, 2.0));
    const Complex c11 = CoherentState::inner(phi, grp.cocycle(grp.cocycle(psi, 0.0, 1.0), 1.0, 2.0));
    CHECK(std::abs(c2 - c11) <= 1e-9 * std::max(1.0, std::abs(c2)));
    // u(0, t) = U_t J_t^*
    const Complex u0t = CoherentState::inner(phi, grp.cocycle(psi, 0.0, t));
    const Complex route = CoherentState::inner(phi, grp.evolve(LimitGroup::shift(psi, -t), t));
    CHECK(std::abs(u0t - route) <= 1e-10 * std::max(1.0, std::abs(u0t)));
    // adaptedness: u(T) only changes the part of the argument inside T
    const auto x1 = v1.time_transform(), x2 = v2.time_transform();
    const auto in1 = x1.windowed(0.2, 1.1), in2 = x2.windowed(0.2, 1.1);
    const auto out1 = x1 + in1.scaled(-1.0), out2 = x2 + in2.scaled(-1.0);
    const Complex full = cocycle_element(0.2, 1.1, coeffs, k, x2, h, x1);
    const Complex split = std::exp(TimeFunction::inner(out2, out1)) * cocycle_element(0.2, 1.1, coeffs, k, in2, h, in1);
    CHECK(std::abs(full - split) <= 1e-9 * std::max(1.0, std::abs(full)));
    // empty interval acts as the identity
    CHECK(std::abs(cocycle_element(0.5, 0.5, coeffs, k, v2, h, v1) - CoherentState::inner(phi, psi)) < 1e-12);
    CHECK_THROWS_AS(cocycle_element(1.0, 0.5, coeffs, k, v2, h, v1), InvalidInput);
}

TEST_CASE("four limits report") {
    const auto rows = four_limits_report({0.3, 0.1, 0.03, 0.01}, 2.0, 1.0, GaussianBathFunction::standard());
    CHECK(rows.size() == 16);
    for (int q = 1; q <= 3; ++q) CHECK(tail_non_increasing(rows, q));
    CHECK(std::abs(rows[12].limit - 1.0 / Complex(2.0, -2.0)) < 1e-15);
}
