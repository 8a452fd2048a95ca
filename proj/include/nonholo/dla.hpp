// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nonholo/mechanical.hpp"
#include "nonholo/skew_gradient.hpp"

namespace nonholo {

/// Where the constraint-force covectors mu are sampled in a DLA step.
enum class ConstraintForceAt { Left, Midpoint };

struct DlaStepResult {
    CanonicalState z;  // (q_{k+1}, p_{k+1}) via the discrete Legendre transform
    Vec lambda;
    int solver_iterations = 0;
};

/// Midpoint discrete Lagrange-d'Alembert step with
/// L_d(q0, q1) = h L((q0+q1)/2, (q1-q0)/h) and exact discrete constraint
/// mu((q0+q1)/2)^T (q1-q0)/h = 0.
DlaStepResult dla_step(const MechanicalSystem& sys, const CanonicalState& z, double h,
                       double solver_tol = 1e-12, int max_iter = 50,
                       ConstraintForceAt force_at = ConstraintForceAt::Midpoint);

struct VarianceRow {
    double h;
    double t;
    double scaled_variance;  // sample variance of H(t) - H(0), divided by h^4
};

/// Variance of the energy errors across an ensemble of initial states,
/// recorded at each multiple of record_dt, scaled by h^4.
std::vector<VarianceRow> dla_energy_variance_experiment(
    const MechanicalSystem& sys, const std::vector<CanonicalState>& ensemble,
    const std::vector<double>& h_list, double t_end, double record_dt);

}  // namespace nonholo
