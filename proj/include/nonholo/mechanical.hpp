// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "nonholo/types.hpp"

namespace nonholo {

/// Canonical description of a mechanical nonholonomic system: Riemannian
/// metric g(q), potential V(q) and the constraint one-forms mu^alpha(q),
/// together with the q-derivatives the integrators need. All callables are
/// immutable after construction and may be shared across threads.
struct MechanicalSystem {
    int n = 0;  ///< configuration dimension
    int k = 0;  ///< number of independent constraints (n - rank D)

    std::function<Mat(const Vec&)> metric;               // n x n, SPD
    std::function<Mat(const Vec&)> metric_inv;           // n x n
    std::function<Tensor3(const Vec&)> metric_inv_deriv; // [i] -> d g^{jk} / d q^i
    std::function<double(const Vec&)> potential;
    std::function<Vec(const Vec&)> potential_grad;
    std::function<Mat(const Vec&)> constraints;          // n x k, columns mu^alpha
    std::function<Tensor3(const Vec&)> constraints_deriv;// [j] -> d mu / d q^j

    /// Canonical Hamiltonian H(q, p) = 1/2 p^T g^{-1}(q) p + V(q).
    double hamiltonian(const CanonicalState& z) const;
    Vec hamiltonian_grad(const CanonicalState& z) const;  // 2n-vector (dH/dq, dH/dp)
};

/// Frame X_a(q) spanning the constraint distribution D_q, with its
/// q-derivatives dX[i](j, a) = d X_a^j / d q^i.
struct ReducedBasis {
    int m = 0;  ///< rank of D
    std::function<Mat(const Vec&)> X;    // n x m
    std::function<Tensor3(const Vec&)> dX;
};

/// rho_b = X_b^i p_i.
ReducedState rho_from_p(const MechanicalSystem& sys, const ReducedBasis& basis,
                        const CanonicalState& z);

/// p_i = g_ij X_a^j g^{ab} rho_b; the result lies in FL(D).
CanonicalState p_from_rho(const MechanicalSystem& sys, const ReducedBasis& basis,
                          const ReducedState& zeta);

/// Components mu_i^alpha g^{ik} p_k; zero iff z satisfies the constraints.
Vec constraint_residual(const MechanicalSystem& sys, const CanonicalState& z);

/// Central-difference generators for the derivative callables, step
/// h = 1e-6 * (1 + |q|_inf). For systems whose derivatives are not hand-coded.
std::function<Tensor3(const Vec&)> fd_matrix_deriv(std::function<Mat(const Vec&)> f);
std::function<Vec(const Vec&)> fd_scalar_grad(std::function<double(const Vec&)> f);

}  // namespace nonholo
