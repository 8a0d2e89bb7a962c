#include "qsde/ito.hpp"

#include <algorithm>
#include <sstream>

#include "qsde/errors.hpp"

namespace qsde {

QSDifferential QSDifferential::zero(Eigen::Index dim) {
    const ComplexMatrix z = ComplexMatrix::Zero(dim, dim);
    return {z, z, z, z};
}

QSDifferential QSDifferential::single(Basis b, const ComplexMatrix& coeff) {
    auto out = zero(coeff.rows());
    out[b] = coeff;
    return out;
}

const ComplexMatrix& QSDifferential::operator[](Basis b) const {
    switch (b) {
        case Basis::kDt: return c_t;
        case Basis::kA: return c_a;
        case Basis::kAdag: return c_adag;
        case Basis::kLambda: return c_lam;
    }
    return c_t;
}

ComplexMatrix& QSDifferential::operator[](Basis b) {
    return const_cast<ComplexMatrix&>(static_cast<const QSDifferential&>(*this)[b]);
}

void QSDifferential::validate() const {
    require_square_finite(c_t, "QSDifferential.c_t");
    require_dim(c_a, c_t.rows(), "QSDifferential.c_a");
    require_dim(c_adag, c_t.rows(), "QSDifferential.c_adag");
    require_dim(c_lam, c_t.rows(), "QSDifferential.c_lam");
}

QSDifferential QSDifferential::operator+(const QSDifferential& o) const {
    return {c_t + o.c_t, c_a + o.c_a, c_adag + o.c_adag, c_lam + o.c_lam};
}

QSDifferential QSDifferential::operator-(const QSDifferential& o) const {
    return {c_t - o.c_t, c_a - o.c_a, c_adag - o.c_adag, c_lam - o.c_lam};
}

QSDifferential QSDifferential::operator*(Complex s) const {
    return {s * c_t, s * c_a, s * c_adag, s * c_lam};
}

std::array<double, 4> QSDifferential::norms() const {
    return {c_t.norm(), c_a.norm(), c_adag.norm(), c_lam.norm()};
}

double QSDifferential::max_norm() const {
    const auto n = norms();
    return *std::max_element(n.begin(), n.end());
}

QSDifferential ito_product(const QSDifferential& x, const QSDifferential& y) {
    x.validate();
    y.validate();
    if (x.dim() != y.dim()) throw InvalidInput("ito_product: dimension mismatch");
    // Non-vanishing table entries: dA dA+ = dt, dA dLambda = dA,
    // dLambda dA+ = dA+, dLambda dLambda = dLambda.
    QSDifferential out;
    out.c_t = x.c_a * y.c_adag;
    out.c_a = x.c_a * y.c_lam;
    out.c_adag = x.c_lam * y.c_adag;
    out.c_lam = x.c_lam * y.c_lam;
    return out;
}

QSDifferential qs_adjoint(const QSDifferential& x) {
    return {x.c_t.adjoint(), x.c_adag.adjoint(), x.c_a.adjoint(), x.c_lam.adjoint()};
}

UnitarityDefects unitarity_defects(const QSDifferential& m) {
    const auto md = qs_adjoint(m);
    const auto sum = m + md;
    return {sum + ito_product(md, m), sum + ito_product(m, md)};
}

QSDifferential adapted_from_hp(const HPCoefficients& hp) {
    const auto id = ComplexMatrix::Identity(hp.w.rows(), hp.w.cols());
    return {-hp.g, -hp.l.adjoint() * hp.w, hp.l, hp.w - id};
}

namespace {

ComplexMatrix checked_inverse(const ComplexMatrix& a, const char* what) {
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 1e-12 * std::max(1.0, sv(0))) {
        std::ostringstream os;
        os << what << " is singular (sigma_min = " << smin << ")";
        throw ConversionSingular(os.str());
    }
    return a.partialPivLu().inverse();
}

}  // namespace

QSDifferential adapted_to_symmetric(const QSDifferential& m) {
    m.validate();
    const auto id = ComplexMatrix::Identity(m.dim(), m.dim());
    const ComplexMatrix inv = checked_inverse(2.0 * id + m.c_lam, "adapted_to_symmetric: 2 + L3");
    QSDifferential n;
    n.c_lam = 2.0 * m.c_lam * inv;
    n.c_a = 2.0 * m.c_a * inv;
    n.c_adag = 2.0 * inv * m.c_adag;
    n.c_t = m.c_t - m.c_a * inv * m.c_adag;

    const auto residual = n + ito_product(m, n) * 0.5 - m;
    const double scale = 1.0 + m.max_norm() * (1.0 + n.max_norm());
    if (residual.max_norm() > 1e-10 * scale) {
        std::ostringstream os;
        os << "adapted_to_symmetric: residual " << residual.max_norm() << " exceeds tolerance";
        throw ConversionSingular(os.str());
    }
    return n;
}

QSDifferential symmetric_to_adapted(const QSDifferential& n) {
    n.validate();
    const auto id = ComplexMatrix::Identity(n.dim(), n.dim());
    const ComplexMatrix inv = checked_inverse(2.0 * id - n.c_lam, "symmetric_to_adapted: 2 - l3");
    QSDifferential m;
    m.c_lam = 2.0 * n.c_lam * inv;
    m.c_a = 2.0 * n.c_a * inv;
    m.c_adag = n.c_adag + 0.5 * m.c_lam * n.c_adag;
    m.c_t = n.c_t + 0.5 * m.c_a * n.c_adag;
    return m;
}

}  // namespace qsde
