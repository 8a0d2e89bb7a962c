#include "qsde/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "qsde/errors.hpp"

namespace qsde {

void require_square_finite(const ComplexMatrix& a, std::string_view what) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw InvalidInput(std::string(what) + ": matrix must be square and non-empty");
    }
    if (!a.allFinite()) {
        throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
    }
}

void require_dim(const ComplexMatrix& a, Eigen::Index dim, std::string_view what) {
    if (a.rows() != dim || a.cols() != dim) {
        std::ostringstream os;
        os << what << ": expected " << dim << "x" << dim << ", got " << a.rows() << "x" << a.cols();
        throw InvalidInput(os.str());
    }
}

double frobenius(const ComplexMatrix& a) { return a.norm(); }

double hermitian_defect(const ComplexMatrix& a) { return (a - a.adjoint()).norm(); }

double unitary_defect(const ComplexMatrix& a) {
    return (a.adjoint() * a - ComplexMatrix::Identity(a.rows(), a.cols())).norm();
}

DefectNorms defect_norms(const ComplexMatrix& a) {
    require_square_finite(a, "defect_norms");
    return {hermitian_defect(a), unitary_defect(a)};
}

double normality_defect(const ComplexMatrix& a) {
    const double n2 = a.squaredNorm();
    if (n2 == 0.0) return 0.0;
    return (a * a.adjoint() - a.adjoint() * a).norm() / n2;
}

ComplexMatrix hermitian_part(const ComplexMatrix& b) { return 0.5 * (b + b.adjoint()); }

ComplexMatrix mat_exp(const ComplexMatrix& a) {
    require_square_finite(a, "mat_exp");
    if (normality_defect(a) <= 1e-13) {
        // Schur form of a normal matrix is diagonal with a unitary basis.
        Eigen::ComplexSchur<ComplexMatrix> schur(a);
        const ComplexMatrix& u = schur.matrixU();
        ComplexVector d = schur.matrixT().diagonal().array().exp();
        return u * d.asDiagonal() * u.adjoint();
    }
    return a.exp();
}

ComplexMatrix polar_unitary(const ComplexMatrix& a) {
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

namespace {

// Hermitian generators whose joint eigenspaces coincide with those of a normal family.
std::vector<ComplexMatrix> hermitian_generators(std::span<const ComplexMatrix> family) {
    std::vector<ComplexMatrix> gens;
    for (const auto& a : family) {
        const double scale = std::max(a.norm(), 1e-300);
        gens.push_back(0.5 * (a + a.adjoint()) / scale);
        gens.push_back((a - a.adjoint()) / (2.0 * kI * scale));
    }
    return gens;
}

bool is_joint_eigenspace(std::span<const ComplexMatrix> family, const ComplexMatrix& v) {
    for (const auto& a : family) {
        const Complex val = (v.adjoint() * a * v).trace() / static_cast<double>(v.cols());
        const double res = (a * v - val * v).norm();
        if (res > 1e-10 * std::max(a.norm(), 1.0)) return false;
    }
    return true;
}

void split(std::span<const ComplexMatrix> family, const std::vector<ComplexMatrix>& gens,
           const ComplexMatrix& v, std::mt19937_64& rng, int depth,
           std::vector<ComplexMatrix>& out) {
    if (v.cols() == 1 || is_joint_eigenspace(family, v)) {
        out.push_back(v);
        return;
    }
    if (depth > 8) {
        throw NotCommuting("joint_diagonalize: could not separate joint eigenspaces");
    }
    std::uniform_real_distribution<double> coef(0.5, 1.5);
    ComplexMatrix c = ComplexMatrix::Zero(v.cols(), v.cols());
    for (const auto& h : gens) c += coef(rng) * (v.adjoint() * h * v);
    c = hermitian_part(c);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c);
    const auto& ev = es.eigenvalues();
    const double gap_tol = 1e-7 * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= ev.size(); ++i) {
        if (i == ev.size() || ev(i) - ev(i - 1) > gap_tol) {
            ComplexMatrix block = v * es.eigenvectors().middleCols(start, i - start);
            if (i - start == v.cols()) {
                // no split happened; retry with fresh coefficients
                split(family, gens, block, rng, depth + 1, out);
            } else {
                split(family, gens, block, rng, depth, out);
            }
            start = i;
        }
    }
}

}  // namespace

SpectralSectors joint_diagonalize(std::span<const ComplexMatrix> family, double tol) {
    if (family.empty()) throw InvalidInput("joint_diagonalize: empty family");
    const Eigen::Index dim = family.front().rows();
    for (std::size_t i = 0; i < family.size(); ++i) {
        require_square_finite(family[i], "joint_diagonalize");
        require_dim(family[i], dim, "joint_diagonalize");
        if (normality_defect(family[i]) > tol) {
            throw InvalidInput("joint_diagonalize: matrix " + std::to_string(i) + " is not normal");
        }
    }
    double worst = 0.0;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const double denom = family[i].norm() * family[j].norm();
            if (denom == 0.0) continue;
            const double c = (family[i] * family[j] - family[j] * family[i]).norm() / denom;
            if (c > worst) {
                worst = c;
                wi = i;
                wj = j;
            }
        }
    }
    if (worst > tol) {
        std::ostringstream os;
        os << "joint_diagonalize: matrices " << wi << " and " << wj
           << " do not commute (relative commutator " << worst << ")";
        throw NotCommuting(os.str());
    }

    const auto gens = hermitian_generators(family);
    std::mt19937_64 rng(0x5eed1234ULL);
    std::vector<ComplexMatrix> blocks;
    split(family, gens, ComplexMatrix::Identity(dim, dim), rng, 0, blocks);

    SpectralSectors out;
    for (auto& b : blocks) {
        // re-orthonormalize to kill accumulated drift
        Eigen::HouseholderQR<ComplexMatrix> qr(b);
        ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, b.cols());
        SpectralSector s;
        s.basis = q;
        s.projector = q * q.adjoint();
        for (const auto& a : family) {
            s.values.push_back((q.adjoint() * a * q).trace() / static_cast<double>(q.cols()));
        }
        out.sectors.push_back(std::move(s));
    }
    return out;
}

}  // namespace qsde
