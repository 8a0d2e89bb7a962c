// coefficients.hpp — symmetric (H, K, R) <-> Hudson–Parthasarathy (G, L, W) coefficient maps.
#pragma once

#include "qsde/linalg.hpp"

namespace qsde {

/// Coefficients of the symmetric (Stratonovich) form: energy H, number coupling K,
/// field coupling R. H and K are Hermitian.
struct SymmetricCoefficients {
    ComplexMatrix h;
    ComplexMatrix k;
    ComplexMatrix r;

    Eigen::Index dim() const { return h.rows(); }
    /// Throws InvalidInput on shape mismatch or Hermitian defects above 1e-10.
    void validate() const;
};

/// Adapted (Ito) coefficients. The dt coefficient of the adapted differential is -g,
/// dA carries l1 = -l^* w, dA+ carries l, dLambda carries w - I.
struct HPCoefficients {
    ComplexMatrix g;
    ComplexMatrix l;
    ComplexMatrix w;
    ComplexMatrix l1;
    ComplexMatrix hs;

    Eigen::Index dim() const { return g.rows(); }
};

struct HPUnitarityReport {
    double d_w = 0.0;    // |w^* w - I|
    double d_iso = 0.0;  // |g + g^* - l^* l|
    double d_l1 = 0.0;   // |l1 + l^* w|
    double d_hs = 0.0;   // |hs - hs^*|
};

/// W = (2 + iK)(2 - iK)^{-1}.
ComplexMatrix cayley(const ComplexMatrix& k);

/// W = cayley(K), L = 2i(2 - iK)^{-1} R, G = -iH + R^*(2 - iK)^{-1} R,
/// H_s = H - R^* K (4 + K^2)^{-1} R.
HPCoefficients hp_from_symmetric(const SymmetricCoefficients& s);

/// Inverse map. Throws CayleySingular when -1 is (numerically) in spec(W).
SymmetricCoefficients symmetric_from_hp(const HPCoefficients& hp);

HPUnitarityReport hp_unitarity_report(const HPCoefficients& hp);

}  // namespace qsde
