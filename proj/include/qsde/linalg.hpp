// linalg.hpp — dense complex matrix helpers used throughout the lab.
//
// Everything here works on small dense operators (d <= 16). Defects are
// always reported in the Frobenius norm.
#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qsde {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// One joint eigenspace of a commuting normal family.
struct SpectralSector {
    ComplexMatrix basis;          // orthonormal columns spanning the sector
    ComplexMatrix projector;      // basis * basis^*
    std::vector<Complex> values;  // one eigenvalue per input matrix, in input order
};

struct SpectralSectors {
    std::vector<SpectralSector> sectors;
};

struct DefectNorms {
    double hermitian_defect = 0.0;  // |a - a^*|_F
    double unitary_defect = 0.0;    // |a^* a - I|_F
};

/// Throws InvalidInput unless `a` is square, non-empty and finite.
void require_square_finite(const ComplexMatrix& a, std::string_view what);

/// Throws InvalidInput unless `a` has dimension `dim`.
void require_dim(const ComplexMatrix& a, Eigen::Index dim, std::string_view what);

double frobenius(const ComplexMatrix& a);
double hermitian_defect(const ComplexMatrix& a);
double unitary_defect(const ComplexMatrix& a);
DefectNorms defect_norms(const ComplexMatrix& a);

/// |a a^* - a^* a|_F relative to |a|_F^2 (zero matrix counts as normal).
double normality_defect(const ComplexMatrix& a);

/// Matrix exponential. Normal inputs go through a Schur (unitary) diagonalization;
/// everything else through scaling and squaring.
ComplexMatrix mat_exp(const ComplexMatrix& a);

/// Joint spectral decomposition of pairwise-commuting normal matrices.
/// `tol` bounds the relative commutator norm |AB - BA| / (|A||B|).
SpectralSectors joint_diagonalize(std::span<const ComplexMatrix> family, double tol = 1e-8);

/// Closest unitary in the Frobenius norm (polar factor U of a = U P).
ComplexMatrix polar_unitary(const ComplexMatrix& a);

/// Hermitian matrix (B + B^*) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& b);

}  // namespace qsde
