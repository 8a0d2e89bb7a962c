#include <doctest.h>

#include "qsde/coefficients.hpp"
#include "qsde/errors.hpp"
#include "qsde/ito.hpp"
#include "test_util.hpp"

using namespace qsde;

namespace {

QSDifferential random_diff(std::mt19937_64& rng, int d) {
    return {testing::random_matrix(rng, d), testing::random_matrix(rng, d), testing::random_matrix(rng, d),
            testing::random_matrix(rng, d)};
}

QSDifferential scalar_diff(Complex t, Complex a, Complex ad, Complex lam) {
    auto m = [](Complex z) { return ComplexMatrix::Constant(1, 1, z); };
    return {m(t), m(a), m(ad), m(lam)};
}

}  // namespace

TEST_CASE("Ito table entries") {
    std::mt19937_64 rng(21);
    const ComplexMatrix b = testing::random_matrix(rng, 3), c = testing::random_matrix(rng, 3);
    const auto x = ito_product(QSDifferential::single(Basis::kA, b), QSDifferential::single(Basis::kAdag, c));
    CHECK(frobenius(x.c_t - b * c) == 0.0);
    CHECK(x.max_norm() == doctest::Approx(frobenius(b * c)));
    const auto y = ito_product(QSDifferential::single(Basis::kAdag, b), QSDifferential::single(Basis::kA, c));
    CHECK(y.max_norm() == 0.0);
    const auto z = ito_product(QSDifferential::single(Basis::kLambda, b), QSDifferential::single(Basis::kLambda, c));
    CHECK(frobenius(z.c_lam - b * c) == 0.0);
    const auto dt = ito_product(QSDifferential::single(Basis::kDt, b), random_diff(rng, 3));
    CHECK(dt.max_norm() == 0.0);
}

TEST_CASE("associativity and adjoint anti-homomorphism") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 10; ++i) {
        const auto x = random_diff(rng, 3), y = random_diff(rng, 3), z = random_diff(rng, 3);
        CHECK((ito_product(ito_product(x, y), z) - ito_product(x, ito_product(y, z))).max_norm() <= 1e-12);
        CHECK((qs_adjoint(ito_product(x, y)) - ito_product(qs_adjoint(y), qs_adjoint(x))).max_norm() <= 1e-12);
        CHECK((qs_adjoint(qs_adjoint(x)) - x).max_norm() == 0.0);
    }
    std::mt19937_64 r2(23);
    const ComplexMatrix b = testing::random_matrix(r2, 2);
    const auto adj = qs_adjoint(QSDifferential::single(Basis::kA, b));
    CHECK(frobenius(adj.c_adag - b.adjoint()) == 0.0);
}

TEST_CASE("unitarity defects") {
    std::mt19937_64 rng(24);
    for (int d : {1, 2, 4}) {
        const auto hp = hp_from_symmetric(testing::random_symmetric(rng, d, d == 4));
        const auto m = adapted_from_hp(hp);
        const auto u = unitarity_defects(m);
        CHECK(u.iso.max_norm() <= 1e-10);
        CHECK(u.coiso.max_norm() <= 1e-10);
        QSDifferential unbalanced = m;
        unbalanced.c_t.setZero();
        const double expect = (hp.l.adjoint() * hp.l).norm();
        CHECK(std::abs(unitarity_defects(unbalanced).iso.c_t.norm() - expect) <= 1e-10);
    }
    // pure number coupling: W^* W - I = 0
    std::mt19937_64 r2(25);
    SymmetricCoefficients k_only{ComplexMatrix::Zero(3, 3), testing::random_hermitian(r2, 3), ComplexMatrix::Zero(3, 3)};
    CHECK(unitarity_defects(adapted_from_hp(hp_from_symmetric(k_only))).iso.c_lam.norm() <= 1e-12);
}

TEST_CASE("adapted <-> symmetric conversion") {
    // L3 = i - 1 from K = 2 gives l3 = 2i
    const auto n = adapted_to_symmetric(scalar_diff(0, 0, 0, Complex(-1, 1)));
    CHECK(std::abs(n.c_lam(0, 0) - 2.0 * kI) < 1e-14);
    // pure drift is unchanged
    const auto drift = adapted_to_symmetric(scalar_diff(Complex(0.3, 0.1), 0, 0, 0));
    CHECK(std::abs(drift.c_t(0, 0) - Complex(0.3, 0.1)) < 1e-15);
    // (H, K, R) = (0, 2, 1): l = (0, i, i, 2i)
    const auto m = adapted_from_hp(hp_from_symmetric(testing::scalar_coeffs(0, 2, 1)));
    const auto l = adapted_to_symmetric(m);
    CHECK(std::abs(l.c_t(0, 0)) < 1e-14);
    CHECK(std::abs(l.c_a(0, 0) - kI) < 1e-14);
    CHECK(std::abs(l.c_adag(0, 0) - kI) < 1e-14);
    CHECK(std::abs(l.c_lam(0, 0) - 2.0 * kI) < 1e-14);
    const auto back = symmetric_to_adapted(scalar_diff(0, kI, kI, 2.0 * kI));
    CHECK(std::abs(back.c_lam(0, 0) - Complex(-1, 1)) < 1e-14);
    CHECK(symmetric_to_adapted(QSDifferential::zero(2)).max_norm() == 0.0);

    CHECK_THROWS_AS(adapted_to_symmetric(scalar_diff(0, 0, 0, -2.0)), ConversionSingular);

    std::mt19937_64 rng(26);
    for (int i = 0; i < 10; ++i) {
        const auto sc = testing::random_symmetric(rng, 3, i % 2 == 0);
        const auto mm = adapted_from_hp(hp_from_symmetric(sc));
        const auto nn = adapted_to_symmetric(mm);
        CHECK((nn + ito_product(mm, nn) * 0.5 - mm).max_norm() <= 1e-10);
        CHECK((symmetric_to_adapted(nn) - mm).max_norm() <= 1e-10);
        CHECK(frobenius(nn.c_t - kI * sc.h) <= 1e-9);
        CHECK(frobenius(nn.c_a - kI * sc.r.adjoint()) <= 1e-9);
        CHECK(frobenius(nn.c_adag - kI * sc.r) <= 1e-9);
        CHECK(frobenius(nn.c_lam - kI * sc.k) <= 1e-9);
        CHECK(frobenius(nn.c_a.adjoint() + nn.c_adag) <= 1e-10);
    }
}
