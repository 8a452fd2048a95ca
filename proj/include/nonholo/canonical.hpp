// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nonholo/mechanical.hpp"
#include "nonholo/qr_diff.hpp"
#include "nonholo/skew_gradient.hpp"

namespace nonholo {

/// H(q, p) as a field on the packed 2n-vector (q, p).
ScalarField canonical_field(const MechanicalSystem& sys);

/// Pieces of the reduced dynamics rebuilt from canonical data at one state:
/// the skew block -C_ab^c rho_c, the partial derivatives of the reduced
/// Hamiltonian, and the assembled Pi.
struct ReducedQuantities {
    Mat sigma;    // m x m skew
    Vec gradQ;    // n
    Vec gradRho;  // m
    Mat Pi;       // (n+m) x (n+m)
};

ReducedQuantities reduced_quantities(const MechanicalSystem& sys, const ReducedBasis& basis,
                                     const ReducedState& zeta);

/// Skew-gradient system on D* assembled from canonical data through the basis;
/// evaluating at zeta samples the basis at zeta.q.
SkewGradientSystem assembled_reduced_system(const MechanicalSystem& sys,
                                            const ReducedBasis& basis);

struct MultiplierStepResult {
    CanonicalState z;
    Vec lambda;
    int solver_iterations = 0;
    double solver_residual = 0.0;
};

/// Direct energy-preserving step on T*Q with multipliers:
/// (z'-z)/h = J dgH(z,z') + lambda_a (0; mu^a(qbar)),  dgH^T (0; mu^a(qbar)) = 0,
/// qbar = (q+q')/2. Preserves H but not, in general, the constraints.
MultiplierStepResult gonzalez_f_step(const MechanicalSystem& sys, const CanonicalState& z,
                                     const StepConfig& cfg);

struct CanonicalStepResult {
    CanonicalState z;
    bool projected_input = false;  // input violated the constraints and was projected
    StepDiagnostics diag;
};

/// QR-reduction step: (q,p) -> (q,rho) -> dg step on the assembled reduced
/// system -> (q',p'). Sign vector frozen from the step's starting point.
CanonicalStepResult gonzalez_r_step(const MechanicalSystem& sys, const CanonicalState& z,
                                    const StepConfig& cfg);

/// As gonzalez_r_step with dX replaced by central differences of step fd_h.
CanonicalStepResult gonzalez_r_fd_step(const MechanicalSystem& sys, const CanonicalState& z,
                                       const StepConfig& cfg, double fd_h);

}  // namespace nonholo
