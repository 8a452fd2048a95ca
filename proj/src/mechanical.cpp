// SPDX-License-Identifier: Apache-2.0
#include "nonholo/mechanical.hpp"

namespace nonholo {

double MechanicalSystem::hamiltonian(const CanonicalState& z) const {
    return 0.5 * z.p.dot(metric_inv(z.q) * z.p) + potential(z.q);
}

Vec MechanicalSystem::hamiltonian_grad(const CanonicalState& z) const {
    Vec out(2 * n);
    const Tensor3 dginv = metric_inv_deriv(z.q);
    for (int i = 0; i < n; ++i)
        out[i] = 0.5 * z.p.dot(dginv[i] * z.p);
    out.head(n) += potential_grad(z.q);
    out.tail(n) = metric_inv(z.q) * z.p;
    return out;
}

ReducedState rho_from_p(const MechanicalSystem& sys, const ReducedBasis& basis,
                        const CanonicalState& z) {
    if (z.q.size() != sys.n || z.p.size() != sys.n)
        throw DimensionMismatch("rho_from_p: state dimension != n");
    const Mat X = basis.X(z.q);
    if (X.rows() != sys.n || X.cols() != basis.m)
        throw DimensionMismatch("rho_from_p: basis shape");
    return {z.q, X.transpose() * z.p};
}

CanonicalState p_from_rho(const MechanicalSystem& sys, const ReducedBasis& basis,
                          const ReducedState& zeta) {
    if (zeta.q.size() != sys.n || zeta.rho.size() != basis.m)
        throw DimensionMismatch("p_from_rho: state dimension");
    const Mat X = basis.X(zeta.q);
    const Mat g = sys.metric(zeta.q);
    const Mat g_red = X.transpose() * g * X;  // reduced metric g_ab
    Eigen::LDLT<Mat> ldlt(g_red);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw RankDeficient("p_from_rho: singular reduced metric (broken basis)");
    return {zeta.q, g * X * ldlt.solve(zeta.rho)};
}

Vec constraint_residual(const MechanicalSystem& sys, const CanonicalState& z) {
    return sys.constraints(z.q).transpose() * (sys.metric_inv(z.q) * z.p);
}

namespace {
double fd_step(const Vec& q) { return 1e-6 * (1.0 + q.lpNorm<Eigen::Infinity>()); }
}

std::function<Tensor3(const Vec&)> fd_matrix_deriv(std::function<Mat(const Vec&)> f) {
    return [f = std::move(f)](const Vec& q) {
        const double h = fd_step(q);
        Tensor3 out(q.size());
        Vec qp = q, qm = q;
        for (int i = 0; i < q.size(); ++i) {
            qp[i] += h;
            qm[i] -= h;
            out[i] = (f(qp) - f(qm)) / (2.0 * h);
            qp[i] = q[i];
            qm[i] = q[i];
        }
        return out;
    };
}

std::function<Vec(const Vec&)> fd_scalar_grad(std::function<double(const Vec&)> f) {
    return [f = std::move(f)](const Vec& q) {
        const double h = fd_step(q);
        Vec out(q.size());
        Vec qp = q, qm = q;
        for (int i = 0; i < q.size(); ++i) {
            qp[i] += h;
            qm[i] -= h;
            out[i] = (f(qp) - f(qm)) / (2.0 * h);
            qp[i] = q[i];
            qm[i] = q[i];
        }
        return out;
    };
}

}  // namespace nonholo
