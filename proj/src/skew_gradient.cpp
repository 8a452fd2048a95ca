// SPDX-License-Identifier: Apache-2.0
#include "nonholo/skew_gradient.hpp"

#include <cmath>

#include "nonholo/newton.hpp"

namespace nonholo {

Vec rhs(const SkewGradientSystem& sys, const Vec& zeta) {
    return sys.Pi(zeta) * sys.H.gradient(zeta);
}

std::pair<Vec, StepDiagnostics> dg_step(const SkewGradientSystem& sys, const Vec& zeta,
                                        const StepConfig& cfg) {
    cfg.validate();
    const double h = cfg.h;

    const auto residual = [&](const Vec& zp) -> Vec {
        const Vec mid = (cfg.pi_approx == PiApprox::Midpoint) ? Vec(0.5 * (zeta + zp)) : zeta;
        return zp - zeta - h * (sys.Pi(mid) * discrete_gradient(cfg.dg, sys.H, zeta, zp));
    };

    const Vec predictor = zeta + h * rhs(sys, zeta);
    const NewtonResult sol = solve_implicit(residual, predictor, cfg.solver_tol, cfg.max_iter);

    StepDiagnostics diag;
    diag.solver_iterations = sol.iterations;
    diag.solver_residual = sol.residual_norm;
    diag.energy = sys.H.value(sol.x);
    if (sys.structure && sys.structure->constraints) {
        const int n = sys.structure->n;
        const Vec qbar = 0.5 * (zeta.head(n) + sol.x.head(n));
        diag.discrete_constraint_residual =
            sys.structure->constraints(qbar).transpose() * ((sol.x.head(n) - zeta.head(n)) / h);
    }
    return {sol.x, diag};
}

Trajectory integrate(const SkewGradientSystem& sys, const Vec& zeta0,
                     const StepConfig& cfg, int n_steps) {
    if (n_steps < 1) throw ConfigError("integrate: n_steps must be >= 1");
    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.diagnostics.reserve(n_steps);
    traj.times.push_back(0.0);
    traj.states.push_back(zeta0);
    const double H0 = sys.H.value(zeta0);
    Vec zeta = zeta0;
    for (int k = 0; k < n_steps; ++k) {
        try {
            auto [zp, diag] = dg_step(sys, zeta, cfg);
            zeta = std::move(zp);
            traj.times.push_back((k + 1) * cfg.h);
            traj.states.push_back(zeta);
            traj.max_rel_energy_drift =
                std::max(traj.max_rel_energy_drift,
                         std::abs(diag.energy - H0) / (H0 == 0.0 ? 1.0 : std::abs(H0)));
            traj.diagnostics.push_back(std::move(diag));
        } catch (const std::runtime_error& e) {
            throw SolverDiverged("integrate: step " + std::to_string(k + 1) + " failed: " +
                                 e.what());
        }
    }
    return traj;
}

}  // namespace nonholo
