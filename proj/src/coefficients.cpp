#include "qsde/coefficients.hpp"

#include <sstream>

#include <Eigen/Eigenvalues>

#include "qsde/errors.hpp"

namespace qsde {

namespace {

constexpr double kHermitianTol = 1e-10;

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

}  // namespace

void SymmetricCoefficients::validate() const {
    require_square_finite(h, "SymmetricCoefficients.h");
    require_square_finite(k, "SymmetricCoefficients.k");
    require_square_finite(r, "SymmetricCoefficients.r");
    require_dim(k, h.rows(), "SymmetricCoefficients.k");
    require_dim(r, h.rows(), "SymmetricCoefficients.r");
    if (hermitian_defect(h) > kHermitianTol) throw InvalidInput("SymmetricCoefficients.h is not Hermitian");
    if (hermitian_defect(k) > kHermitianTol) throw InvalidInput("SymmetricCoefficients.k is not Hermitian");
}

ComplexMatrix cayley(const ComplexMatrix& k) {
    require_square_finite(k, "cayley");
    if (hermitian_defect(k) > kHermitianTol) throw InvalidInput("cayley: K is not Hermitian");
    const auto id = identity(k.rows());
    // (2 - iK) is normal with spectrum 2 - i*spec(K), never singular
    return (2.0 * id + kI * k) * (2.0 * id - kI * k).partialPivLu().inverse();
}

HPCoefficients hp_from_symmetric(const SymmetricCoefficients& s) {
    s.validate();
    const auto d = s.dim();
    const auto id = identity(d);
    const ComplexMatrix inv = (2.0 * id - kI * s.k).partialPivLu().inverse();
    HPCoefficients hp;
    hp.w = cayley(s.k);
    hp.l = 2.0 * kI * inv * s.r;
    hp.g = -kI * s.h + s.r.adjoint() * inv * s.r;
    hp.l1 = -hp.l.adjoint() * hp.w;
    const ComplexMatrix k2 = (4.0 * id + s.k * s.k).partialPivLu().inverse();
    hp.hs = s.h - s.r.adjoint() * s.k * k2 * s.r;

    const auto rep = hp_unitarity_report(hp);
    const double scale = 1.0 + s.r.squaredNorm() + s.h.norm();
    if (rep.d_w > 1e-10 || rep.d_iso > 1e-10 * scale || rep.d_l1 > 1e-12 * scale ||
        rep.d_hs > 1e-10 * scale) {
        std::ostringstream os;
        os << "hp_from_symmetric: unitarity conditions violated (d_w=" << rep.d_w
           << ", d_iso=" << rep.d_iso << ", d_hs=" << rep.d_hs << ")";
        throw Error(os.str());
    }
    return hp;
}

SymmetricCoefficients symmetric_from_hp(const HPCoefficients& hp) {
    require_square_finite(hp.w, "HPCoefficients.w");
    require_square_finite(hp.g, "HPCoefficients.g");
    require_square_finite(hp.l, "HPCoefficients.l");
    require_dim(hp.g, hp.w.rows(), "HPCoefficients.g");
    require_dim(hp.l, hp.w.rows(), "HPCoefficients.l");
    const auto d = hp.w.rows();
    const auto id = identity(d);
    const ComplexMatrix ipw = id + hp.w;
    // -1 in spec(W) <=> I + W singular; measure by the smallest singular value
    Eigen::JacobiSVD<ComplexMatrix> svd(ipw);
    const double smin = svd.singularValues()(d - 1);
    if (smin <= 1e-12) {
        std::ostringstream os;
        os << "symmetric_from_hp: -1 in spectrum of W (sigma_min(I+W) = " << smin << ")";
        throw CayleySingular(os.str());
    }
    const ComplexMatrix ipw_inv = ipw.partialPivLu().inverse();
    SymmetricCoefficients s;
    s.k = 2.0 * kI * (id - hp.w) * ipw_inv;
    s.r = -2.0 * kI * ipw_inv * hp.l;
    const ComplexMatrix inv = (2.0 * id - kI * s.k).partialPivLu().inverse();
    const ComplexMatrix l0 = -hp.g;
    s.h = -kI * (l0 + s.r.adjoint() * inv * s.r);
    return s;
}

HPUnitarityReport hp_unitarity_report(const HPCoefficients& hp) {
    HPUnitarityReport rep;
    rep.d_w = unitary_defect(hp.w);
    rep.d_iso = (hp.g + hp.g.adjoint() - hp.l.adjoint() * hp.l).norm();
    rep.d_l1 = (hp.l1 + hp.l.adjoint() * hp.w).norm();
    rep.d_hs = hermitian_defect(hp.hs);
    return rep;
}

}  // namespace qsde
