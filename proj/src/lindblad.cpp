#include "qsde/lindblad.hpp"

#include <cmath>

#include "qsde/errors.hpp"

namespace qsde {

namespace {

// vec(A X B) = (B^T kron A) vec(X), column stacking.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexVector vec(const ComplexMatrix& a) {
    return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d) {
    return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

double jump_weight(const LindbladModel& m) { return m.jump_scale; }

}  // namespace

LindbladModel LindbladModel::make(const ComplexMatrix& h0, std::vector<ComplexMatrix> channels,
                                  std::vector<ComplexMatrix> w, double jump_scale) {
    LindbladModel m;
    m.h0 = h0;
    m.channels = std::move(channels);
    m.w = std::move(w);
    m.jump_scale = jump_scale;
    m.validate();
    const Eigen::Index d = h0.rows();
    ComplexMatrix lsum = ComplexMatrix::Zero(d, d);
    for (const auto& l : m.channels) lsum += l.adjoint() * l;
    m.g = -kI * h0 + 0.5 * lsum;
    return m;
}

ComplexMatrix LindbladModel::channel_w(std::size_t l) const {
    if (w.empty()) return ComplexMatrix::Identity(dim(), dim());
    return w.at(l);
}

void LindbladModel::validate() const {
    require_square_finite(h0, "h0");
    if (hermitian_defect(h0) > 1e-10) throw InvalidInput("h0 is not Hermitian");
    for (const auto& l : channels) require_dim(l, dim(), "channel");
    if (!w.empty()) {
        if (w.size() != channels.size()) throw InvalidInput("one w per channel required");
        for (const auto& u : w) {
            require_dim(u, dim(), "w");
            if (unitary_defect(u) > 1e-10) throw InvalidInput("channel w is not unitary");
        }
    }
}

LindbladModel flipped_dissipator(const LindbladModel& m) {
    LindbladModel out = m;
    out.jump_scale = -m.jump_scale;
    return out;
}

LindbladModel amplitude_damping(double rate) {
    ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
    lower(0, 1) = std::sqrt(rate);
    return LindbladModel::make(ComplexMatrix::Zero(2, 2), {lower});
}

ComplexMatrix apply_generator(const LindbladModel& m, const ComplexMatrix& b) {
    require_dim(b, m.dim(), "observable");
    ComplexMatrix out = -m.g.adjoint() * b - b * m.g;
    for (const auto& l : m.channels) out += jump_weight(m) * l.adjoint() * b * l;
    return out;
}

ComplexMatrix superoperator(const LindbladModel& m) {
    const Eigen::Index d = m.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix s = -kron(id, m.g.adjoint()) - kron(m.g.transpose(), id);
    for (const auto& l : m.channels) s += jump_weight(m) * kron(l.transpose(), l.adjoint());
    return s;
}

ComplexMatrix predual_superoperator(const LindbladModel& m) {
    const Eigen::Index d = m.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix s = -kron(id, m.g) - kron(m.g.conjugate(), id);
    for (const auto& l : m.channels) s += jump_weight(m) * kron(l.conjugate(), l);
    return s;
}

ComplexMatrix heisenberg_evolve(const LindbladModel& m, const ComplexMatrix& b, double t) {
    if (!(t >= 0.0)) throw InvalidInput("heisenberg_evolve: t must be >= 0");
    require_dim(b, m.dim(), "observable");
    const ComplexMatrix e = mat_exp(t * superoperator(m));
    return unvec(e * vec(b), m.dim());
}

ComplexMatrix repeated_interaction_evolve(const LindbladModel& m, const ComplexMatrix& b, double t,
                                          double dt, RepeatedInteractionStats* stats) {
    require_dim(b, m.dim(), "observable");
    if (!(dt > 0.0) || !(dt < t)) throw InvalidInput("repeated_interaction_evolve: need 0 < dt < t");
    const double ratio = t / dt;
    const long n = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
        throw InvalidInput("repeated_interaction_evolve: t / dt must be an integer");

    const Eigen::Index d = m.dim();
    const auto nc = static_cast<Eigen::Index>(m.channels.size());
    const double sq = std::sqrt(dt);
    ComplexMatrix v = ComplexMatrix::Zero(d * (nc + 1), d * (nc + 1));
    v.topLeftCorner(d, d) = ComplexMatrix::Identity(d, d) - m.g * dt;
    for (Eigen::Index c = 0; c < nc; ++c) {
        const ComplexMatrix& l = m.channels[static_cast<std::size_t>(c)];
        const ComplexMatrix wl = m.channel_w(static_cast<std::size_t>(c));
        v.block(0, (c + 1) * d, d, d) = -l.adjoint() * wl * sq;
        v.block((c + 1) * d, 0, d, d) = l * sq;
        v.block((c + 1) * d, (c + 1) * d, d, d) = wl;
    }
    v = polar_unitary(v);

    // Only the vacuum column of V enters: B <- sum_k V_k0^* B V_k0.
    std::vector<ComplexMatrix> col;
    for (Eigen::Index k = 0; k <= nc; ++k) col.push_back(v.block(k * d, 0, d, d));
    ComplexMatrix cur = b;
    for (long s = 0; s < n; ++s) {
        ComplexMatrix next = ComplexMatrix::Zero(d, d);
        for (const auto& vk : col) next += vk.adjoint() * cur * vk;
        cur = std::move(next);
    }
    if (stats) {
        stats->steps = static_cast<int>(n);
        stats->max_unitary_defect = unitary_defect(v);
    }
    return cur;
}

double choi_min_eig(const LindbladModel& m, double t) {
    if (!(t >= 0.0)) throw InvalidInput("choi_min_eig: t must be >= 0");
    const Eigen::Index d = m.dim();
    const ComplexMatrix e = mat_exp(t * predual_superoperator(m));
    ComplexMatrix choi = ComplexMatrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            ComplexMatrix eij = ComplexMatrix::Zero(d, d);
            eij(i, j) = 1.0;
            choi.block(i * d, j * d, d, d) = unvec(e * vec(eij), d);
        }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(choi), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double trace_preservation_defect(const LindbladModel& m, double t) {
    const Eigen::Index d = m.dim();
    const ComplexMatrix e = mat_exp(t * predual_superoperator(m));
    // Phi_t^*(I) through the adjoint: tr(Phi(E_ij)) must equal delta_ij.
    ComplexMatrix dual = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            ComplexMatrix eij = ComplexMatrix::Zero(d, d);
            eij(i, j) = 1.0;
            dual(j, i) = unvec(e * vec(eij), d).trace();
        }
    return frobenius(dual - ComplexMatrix::Identity(d, d));
}

}  // namespace qsde
