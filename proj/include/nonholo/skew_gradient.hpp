// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include "nonholo/discrete_gradient.hpp"
#include "nonholo/types.hpp"

namespace nonholo {

/// Optional (q, rho) split for constraint diagnostics on D*.
struct ReducedStructure {
    int n = 0;  ///< leading configuration coordinates
    int m = 0;  ///< trailing momentum coordinates; n + m == N
    std::function<Mat(const Vec&)> constraints;  // mu(q), n x k; may be empty
};

/// zeta' = Pi(zeta) grad H(zeta) with Pi skew-symmetric; H is a first
/// integral of the exact flow.
struct SkewGradientSystem {
    int N = 0;
    ScalarField H;
    std::function<Mat(const Vec&)> Pi;
    std::optional<ReducedStructure> structure;
};

enum class PiApprox { Midpoint, FrozenAtStart };

struct StepConfig {
    double h = 0.0;
    DiscreteGradientKind dg;
    PiApprox pi_approx = PiApprox::Midpoint;
    double solver_tol = 1e-12;
    int max_iter = 50;

    void validate() const {
        if (h == 0.0) throw ConfigError("StepConfig: h must be nonzero");
        if (solver_tol <= 0.0) throw ConfigError("StepConfig: solver_tol must be positive");
        if (max_iter < 1) throw ConfigError("StepConfig: max_iter must be >= 1");
    }
};

struct StepDiagnostics {
    int solver_iterations = 0;
    double solver_residual = 0.0;
    double energy = 0.0;                        // H(zeta')
    Vec discrete_constraint_residual;           // mu(qbar)^T (q'-q)/h, empty without structure
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<StepDiagnostics> diagnostics;   // one entry per step
    double max_rel_energy_drift = 0.0;          // max_k |H_k - H_0| / |H_0|
};

/// Pi(zeta) grad H(zeta).
Vec rhs(const SkewGradientSystem& sys, const Vec& zeta);

/// One step of (zeta' - zeta)/h = Pi~ dgH(zeta, zeta')  with
/// Pi~ = Pi((zeta+zeta')/2) or Pi(zeta) per cfg.pi_approx.
std::pair<Vec, StepDiagnostics> dg_step(const SkewGradientSystem& sys, const Vec& zeta,
                                        const StepConfig& cfg);

Trajectory integrate(const SkewGradientSystem& sys, const Vec& zeta0,
                     const StepConfig& cfg, int n_steps);

}  // namespace nonholo
