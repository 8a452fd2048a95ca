// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nonholo/mechanical.hpp"
#include "nonholo/types.hpp"

namespace nonholo {

/// Householder sign choices, one per factorization step. Entries are +1 or -1.
using SignVector = std::vector<int>;

struct QRDiffOutput {
    Mat Q;       // n x n orthogonal
    Mat R;       // n x k, upper triangular in its leading k rows
    Tensor3 dQ;  // dQ[i] = dQ/dq^i
};

/// Householder QR of A(q) in R^{n x k} with propagation of all partial
/// derivatives of Q through the reflection recursion. The R factor is kept
/// as well so the factorization can be verified.
QRDiffOutput qr_diff(const Mat& A, const Tensor3& dA, const SignVector& s);

/// Sign choices that avoid cancellation in the pivot: s_t = sign(R_tt),
/// +1 on a zero pivot. Used to freeze s at the start of a step.
SignVector default_signs(const Mat& A);

/// Q factor alone (no derivatives), for finite differencing and sampling.
Mat qr_orthogonal_factor(const Mat& A, const SignVector& s);

/// Basis for D_q from the last m columns of Q, with dX from qr_diff.
ReducedBasis basis_from_constraints(const MechanicalSystem& sys, const SignVector& s);

/// Central-difference alternative: (X(q + h e_i) - X(q - h e_i)) / (2h)
/// with the same sign vector on both sides.
Tensor3 fd_basis_derivative(const MechanicalSystem& sys, const Vec& q,
                            const SignVector& s, double h);

/// Basis whose dX comes from fd_basis_derivative instead of the recursion.
ReducedBasis fd_basis_from_constraints(const MechanicalSystem& sys, const SignVector& s,
                                       double fd_h);

}  // namespace nonholo
