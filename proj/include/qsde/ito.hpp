// ito.hpp — stochastic differentials over the basis (dt, dA, dA+, dLambda).
#pragma once

#include <array>
#include <string_view>

#include "qsde/coefficients.hpp"
#include "qsde/linalg.hpp"

namespace qsde {

/// Coefficient index in the fixed basis order (dt, dA, dA+, dLambda).
enum class Basis { kDt = 0, kA = 1, kAdag = 2, kLambda = 3 };

inline constexpr std::array<std::string_view, 4> kBasisNames{"dt", "dA", "dAdag", "dLambda"};

/// c_t dt + c_a dA + c_adag dA+ + c_lam dLambda with operator coefficients.
struct QSDifferential {
    ComplexMatrix c_t;
    ComplexMatrix c_a;
    ComplexMatrix c_adag;
    ComplexMatrix c_lam;

    static QSDifferential zero(Eigen::Index dim);
    /// Differential with a single non-zero coefficient.
    static QSDifferential single(Basis b, const ComplexMatrix& coeff);

    Eigen::Index dim() const { return c_t.rows(); }
    const ComplexMatrix& operator[](Basis b) const;
    ComplexMatrix& operator[](Basis b);
    /// Throws InvalidInput unless the four coefficients are square of one dimension.
    void validate() const;

    QSDifferential operator+(const QSDifferential& o) const;
    QSDifferential operator-(const QSDifferential& o) const;
    QSDifferential operator*(Complex s) const;
    /// Frobenius norm of each coefficient, in basis order.
    std::array<double, 4> norms() const;
    double max_norm() const;
};

/// Product through the Ito table; x is the left factor.
QSDifferential ito_product(const QSDifferential& x, const QSDifferential& y);

/// dt^+ = dt, dA^+ = dA+, dLambda^+ = dLambda, coefficients adjointed.
QSDifferential qs_adjoint(const QSDifferential& x);

struct UnitarityDefects {
    QSDifferential iso;    // m + m^+ + m^+ m
    QSDifferential coiso;  // m + m^+ + m m^+
};

UnitarityDefects unitarity_defects(const QSDifferential& m);

/// Adapted differential (L0, L1, L2, L3) built from HP coefficients:
/// L0 = -G, L1 = -L^* W, L2 = L, L3 = W - I.
QSDifferential adapted_from_hp(const HPCoefficients& hp);

/// Solves n + 1/2 m n = m coefficient-wise (n is the symmetric differential).
/// Throws ConversionSingular if 2 + L3 is singular.
QSDifferential adapted_to_symmetric(const QSDifferential& m);

/// Inverse of adapted_to_symmetric. Throws ConversionSingular if 2 - l3 is singular.
QSDifferential symmetric_to_adapted(const QSDifferential& n);

}  // namespace qsde
