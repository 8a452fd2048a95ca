// SPDX-License-Identifier: Apache-2.0
#include "nonholo/canonical.hpp"

#include <cmath>

#include "nonholo/newton.hpp"

namespace nonholo {

ScalarField canonical_field(const MechanicalSystem& sys) {
    const int n = sys.n;
    return {[sys, n](const Vec& x) {
                return sys.hamiltonian({x.head(n), x.tail(n)});
            },
            [sys, n](const Vec& x) {
                return sys.hamiltonian_grad({x.head(n), x.tail(n)});
            }};
}

ReducedQuantities reduced_quantities(const MechanicalSystem& sys, const ReducedBasis& basis,
                                     const ReducedState& zeta) {
    const int n = sys.n;
    const int m = basis.m;
    const Vec& q = zeta.q;
    const Mat X = basis.X(q);
    const Tensor3 dX = basis.dX(q);
    const Mat g = sys.metric(q);

    const Mat g_red = X.transpose() * g * X;
    const Vec yred = Eigen::LDLT<Mat>(g_red).solve(zeta.rho);  // g^{ab} rho_b
    const Vec p = g * X * yred;

    // T(i, a) = dX_a^j/dq^i p_j
    Mat T(n, m);
    for (int i = 0; i < n; ++i) T.row(i) = (dX[i].transpose() * p).transpose();

    ReducedQuantities out;
    out.sigma = T.transpose() * X - X.transpose() * T;
    out.gradRho = yred;
    out.gradQ.resize(n);
    const Tensor3 dginv = sys.metric_inv_deriv(q);
    for (int i = 0; i < n; ++i)
        out.gradQ[i] = 0.5 * p.dot(dginv[i] * p) - T.row(i).dot(yred);
    out.gradQ += sys.potential_grad(q);

    out.Pi = Mat::Zero(n + m, n + m);
    out.Pi.topRightCorner(n, m) = X;
    out.Pi.bottomLeftCorner(m, n) = -X.transpose();
    out.Pi.bottomRightCorner(m, m) = out.sigma;
    return out;
}

SkewGradientSystem assembled_reduced_system(const MechanicalSystem& sys,
                                            const ReducedBasis& basis) {
    const int n = sys.n;
    const int m = basis.m;
    SkewGradientSystem out;
    out.N = n + m;
    out.H = {[sys, basis, n](const Vec& zeta) {
                 const Vec q = zeta.head(n);
                 const Mat X = basis.X(q);
                 const Mat g_red = X.transpose() * sys.metric(q) * X;
                 const Vec rho = zeta.tail(zeta.size() - n);
                 return 0.5 * rho.dot(Eigen::LDLT<Mat>(g_red).solve(rho)) + sys.potential(q);
             },
             [sys, basis, n, m](const Vec& zeta) {
                 const ReducedQuantities rq =
                     reduced_quantities(sys, basis, {zeta.head(n), zeta.tail(m)});
                 Vec grad(n + m);
                 grad.head(n) = rq.gradQ;
                 grad.tail(m) = rq.gradRho;
                 return grad;
             }};
    out.Pi = [sys, basis, n, m](const Vec& zeta) {
        return reduced_quantities(sys, basis, {zeta.head(n), zeta.tail(m)}).Pi;
    };
    out.structure = ReducedStructure{n, m, sys.constraints};
    return out;
}

MultiplierStepResult gonzalez_f_step(const MechanicalSystem& sys, const CanonicalState& z,
                                     const StepConfig& cfg) {
    cfg.validate();
    const int n = sys.n;
    const int k = sys.k;
    const double h = cfg.h;
    const ScalarField H = canonical_field(sys);
    Vec z0(2 * n);
    z0 << z.q, z.p;

    // Unknowns (q', p', lambda), 2n + k of them.
    const auto residual = [&](const Vec& u) -> Vec {
        const Vec zp = u.head(2 * n);
        const Vec lambda = u.tail(k);
        const Vec qbar = 0.5 * (z.q + zp.head(n));
        const Mat M = (k > 0) ? sys.constraints(qbar) : Mat(n, 0);
        const Vec dg = discrete_gradient(cfg.dg, H, z0, zp);
        Vec r(2 * n + k);
        r.head(n) = (zp.head(n) - z.q) / h - dg.tail(n);
        r.segment(n, n) = (zp.tail(n) - z.p) / h + dg.head(n) - M * lambda;
        if (k > 0) r.tail(k) = M.transpose() * dg.tail(n);
        return r;
    };

    Vec guess(2 * n + k);
    const Vec g0 = H.gradient(z0);
    guess.head(n) = z.q + h * g0.tail(n);
    guess.segment(n, n) = z.p - h * g0.head(n);
    guess.tail(k).setZero();

    const NewtonResult sol = solve_implicit(residual, guess, cfg.solver_tol, cfg.max_iter);
    MultiplierStepResult out;
    out.z = {sol.x.head(n), sol.x.segment(n, n)};
    out.lambda = sol.x.tail(k);
    out.solver_iterations = sol.iterations;
    out.solver_residual = sol.residual_norm;
    return out;
}

namespace {

CanonicalStepResult reduction_step(const MechanicalSystem& sys, const CanonicalState& z,
                                   const StepConfig& cfg, const ReducedBasis& basis) {
    const int n = sys.n;
    const int m = basis.m;
    CanonicalStepResult out;

    ReducedState zeta = rho_from_p(sys, basis, z);
    CanonicalState z_in = z;
    const double scale = 1.0 + z.p.lpNorm<Eigen::Infinity>();
    if (constraint_residual(sys, z).lpNorm<Eigen::Infinity>() > 1e-10 * scale) {
        z_in = p_from_rho(sys, basis, zeta);  // g-orthogonal projection onto FL(D)
        out.projected_input = true;
        zeta = rho_from_p(sys, basis, z_in);
    }

    const SkewGradientSystem red = assembled_reduced_system(sys, basis);
    Vec packed(n + m);
    packed << zeta.q, zeta.rho;
    auto [zp, diag] = dg_step(red, packed, cfg);
    out.diag = std::move(diag);
    out.z = p_from_rho(sys, basis, {zp.head(n), zp.tail(m)});
    return out;
}

}  // namespace

CanonicalStepResult gonzalez_r_step(const MechanicalSystem& sys, const CanonicalState& z,
                                    const StepConfig& cfg) {
    if (cfg.h == 0.0) return {z, false, {}};  // degenerate step is the identity
    cfg.validate();
    const SignVector s = default_signs(sys.constraints(z.q));
    return reduction_step(sys, z, cfg, basis_from_constraints(sys, s));
}

CanonicalStepResult gonzalez_r_fd_step(const MechanicalSystem& sys, const CanonicalState& z,
                                       const StepConfig& cfg, double fd_h) {
    if (cfg.h == 0.0) return {z, false, {}};
    cfg.validate();
    const SignVector s = default_signs(sys.constraints(z.q));
    return reduction_step(sys, z, cfg, fd_basis_from_constraints(sys, s, fd_h));
}

}  // namespace nonholo
