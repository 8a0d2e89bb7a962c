#include <doctest.h>

#include "qsde/errors.hpp"
#include "qsde/fock_boundary.hpp"

using namespace qsde;

namespace {

const SectorBoundary kSb = SectorBoundary::from_sector(ScalarSector{0.0, 2.0, 1.0, 0.0});
const std::vector<GaussianBathFunction> kSeeds1{{Complex(1.0, 0.0), 0.0, 1.5, 0.0}};
const std::vector<GaussianBathFunction> kSeeds2{{Complex(0.5, 0.3), 0.0, 1.0, 0.0}, {Complex(0.2, 0.0), 0.0, 2.0, 0.0}};

JumpVectorOptions coarse() {
    JumpVectorOptions o;
    o.grid = LineGrid{-6.0, 6.0, 6000};
    o.edge_width = 0.08;
    return o;
}

}  // namespace

TEST_CASE("sector boundary data") {
    kSb.validate();
    CHECK(std::abs(kSb.w - kI) < 1e-15);
    SectorBoundary bad = kSb;
    bad.g += 0.1;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("integrand-level jump condition") {
    const auto v = GaussianBathFunction::standard();
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k < n; ++k) {
            std::vector<double> rest;
            for (int m = 0; m < n - 1; ++m) rest.push_back(0.37 * (m + 1) - 0.2);
            const auto r = jump_residual_integrand(n, 1.0, k, rest, kSb, v, Complex(0.7, 0.2));
            CHECK(r.residual_abs <= 1e-12 * r.scale);
        }
    CHECK_THROWS_AS(phi_tilde_eval(2, 1.0, {0.0, 0.3}, kSb, v, 1.0), DomainError);
}

TEST_CASE("resolvent-level jump condition and large-mu limit") {
    const auto v = GaussianBathFunction::standard();
    const auto r = resolvent_jump_residual(2, 1.0, 1, {0.17}, kSb, v, Complex(0.7, 0.2));
    CHECK(r.residual_abs <= 1e-4 * r.scale);
    // mu R_mu phi -> phi_0 pointwise as mu -> infinity
    const auto big = resolvent_component(1, 200.0, {{-0.4}}, kSb, v, 1.0, {40.0, 200000});
    CHECK(std::abs(200.0 * big.values[0] - v.time_value(-0.4)) < 0.01);
    CHECK_THROWS_AS(resolvent_component(1, -5.0, {{0.3}}, kSb, v, 1.0), InvalidInput);
}

TEST_CASE("constructed Fock vectors satisfy the boundary conditions") {
    const auto psi = build_jump_vector(2, kSb, kSeeds1, coarse());
    double worst = 0;
    for (const auto& r : vector_jump_residuals(psi, kSb)) worst = std::max(worst, r.residual_abs / r.scale);
    CHECK(worst <= 1e-12);
    CHECK(boundary_condition_defect(psi, kSb) <= 1e-12);
    CHECK(permutation_asymmetry(psi) <= 1e-12);
    CHECK(trace_consistency(psi) <= 1e-5);
    const auto lev = psi.level_norms2();
    CHECK(lev.size() == 3);
    CHECK(lev[1] < lev[0]);
    CHECK(lev[2] < lev[1]);
    CHECK(psi.norm() == doctest::Approx(std::sqrt(lev[0] + lev[1] + lev[2])));
}

TEST_CASE("pairing symmetry and the broken-jump control") {
    JumpVectorOptions o = coarse();
    const auto psi = build_jump_vector(2, kSb, kSeeds1, o), phi = build_jump_vector(2, kSb, kSeeds2, o);
    const auto p = pairing_defect(phi, psi, kSb);
    CHECK(p.normalized <= 1e-3);
    CHECK(p.discretization <= p.defect + 1e-15);

    o.enforce_jump = false;
    const auto psb = build_jump_vector(2, kSb, kSeeds1, o), phb = build_jump_vector(2, kSb, kSeeds2, o);
    CHECK_THROWS_AS(apply_boundary_hamiltonian(psb, kSb), PreconditionError);
    const auto q = pairing_defect(phb, psb, kSb, false);
    CHECK(q.normalized >= 10 * p.normalized);
}
