#include <doctest.h>

#include "qsde/coefficients.hpp"
#include "qsde/errors.hpp"
#include "test_util.hpp"

using namespace qsde;
using testing::scalar_coeffs;

namespace {
Complex s(const ComplexMatrix& m) { return m(0, 0); }
}  // namespace

TEST_CASE("cayley transform") {
    CHECK(frobenius(cayley(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)) == 0.0);
    CHECK(std::abs(s(cayley(ComplexMatrix::Constant(1, 1, 2.0))) - kI) < 1e-15);
    ComplexMatrix k = ComplexMatrix::Zero(2, 2);
    k(0, 0) = 2;
    k(1, 1) = -2;
    const ComplexMatrix w = cayley(k);
    CHECK(std::abs(w(0, 0) - kI) < 1e-15);
    CHECK(std::abs(w(1, 1) + kI) < 1e-15);
    CHECK_THROWS_AS(cayley(ComplexMatrix::Constant(1, 1, kI)), InvalidInput);

    std::mt19937_64 rng(11);
    const ComplexMatrix kk = testing::random_hermitian(rng, 6);
    const ComplexMatrix ww = cayley(kk);
    CHECK(unitary_defect(ww) <= 1e-12);
    CHECK(frobenius(ww * kk - kk * ww) <= 1e-10);
}

TEST_CASE("hp_from_symmetric scalar examples") {
    const auto z = hp_from_symmetric(scalar_coeffs(0, 0, 0));
    CHECK(std::abs(s(z.w) - 1.0) < 1e-15);
    CHECK(std::abs(s(z.g)) < 1e-15);

    const auto a = hp_from_symmetric(scalar_coeffs(0, 0, 1));
    CHECK(std::abs(s(a.l) - kI) < 1e-15);
    CHECK(std::abs(s(a.g) - 0.5) < 1e-15);
    CHECK(std::abs(s(a.l1) - kI) < 1e-15);

    const auto b = hp_from_symmetric(scalar_coeffs(0, 2, 1));
    CHECK(std::abs(s(b.w) - kI) < 1e-15);
    CHECK(std::abs(s(b.l) - Complex(-0.5, 0.5)) < 1e-15);
    CHECK(std::abs(s(b.g) - Complex(0.25, 0.25)) < 1e-15);
    CHECK(std::abs(2 * s(b.g).real() - std::norm(s(b.l))) < 1e-15);
}

TEST_CASE("symmetric_from_hp inverts and detects -1 in spec(W)") {
    const auto back = symmetric_from_hp(hp_from_symmetric(scalar_coeffs(0, 2, 1)));
    CHECK(std::abs(s(back.h)) < 1e-14);
    CHECK(std::abs(s(back.k) - 2.0) < 1e-14);
    CHECK(std::abs(s(back.r) - 1.0) < 1e-14);

    HPCoefficients bad = hp_from_symmetric(scalar_coeffs(0, 0, 0));
    bad.w(0, 0) = -1.0;
    CHECK_THROWS_AS(symmetric_from_hp(bad), CayleySingular);
}

TEST_CASE("round trip and dissipativity on random inputs") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 40; ++i) {
        const int d = 1 + i % 8;
        const auto sc = testing::random_symmetric(rng, d, i % 2 == 0);
        const auto hp = hp_from_symmetric(sc);
        const auto back = symmetric_from_hp(hp);
        CHECK(frobenius(back.h - sc.h) <= 1e-9);
        CHECK(frobenius(back.k - sc.k) <= 1e-9);
        CHECK(frobenius(back.r - sc.r) <= 1e-9);
        const auto rep = hp_unitarity_report(hp);
        CHECK(std::max({rep.d_w, rep.d_iso, rep.d_l1, rep.d_hs}) <= 1e-10);
        Eigen::ComplexEigenSolver<ComplexMatrix> es(hp.g);
        CHECK(es.eigenvalues().real().minCoeff() >= -1e-12);
    }
}

TEST_CASE("unitarity report detects corruption") {
    const int d = 3;
    std::mt19937_64 rng(13);
    const auto hp = hp_from_symmetric(testing::random_symmetric(rng, d, false));
    HPCoefficients w11 = hp;
    w11.w *= 1.1;
    CHECK(hp_unitarity_report(w11).d_w == doctest::Approx(0.21 * std::sqrt(d)).epsilon(1e-9));
    HPCoefficients g1 = hp;
    g1.g += ComplexMatrix::Identity(d, d);
    CHECK(hp_unitarity_report(g1).d_iso == doctest::Approx(2 * std::sqrt(d)).epsilon(1e-9));
}
