// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>

#include "nonholo/types.hpp"

namespace nonholo {

/// Differentiable H: R^N -> R with its exact gradient.
struct ScalarField {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
};

enum class DiscreteGradientTag { AVF, Gonzalez, CoordinateIncrement };

struct DiscreteGradientKind {
    DiscreteGradientTag tag = DiscreteGradientTag::Gonzalez;
    int avf_nodes = 4;                  // Gauss-Legendre node count, exact for grad degree <= 2*nodes-1
    double coincidence_tol = 1e-14;     // relative switch to the exact gradient
};

/// Gauss-Legendre nodes/weights on [0, 1].
std::pair<Vec, Vec> gauss_legendre_01(int nodes);

/// Mean-value (averaged vector field) discrete gradient:
/// quadrature of int_0^1 grad H((1-xi) x + xi x') dxi.
Vec avf_gradient(const ScalarField& H, const Vec& x, const Vec& xp, int nodes);

/// Midpoint (Gonzalez) discrete gradient; falls back to grad H(midpoint)
/// when |x' - x| <= coincidence_tol * (1 + |x|).
Vec gonzalez_gradient(const ScalarField& H, const Vec& x, const Vec& xp,
                      double coincidence_tol = 1e-14);

/// Coordinate-increment (Itoh-Abe) discrete gradient, natural index order.
Vec itoh_abe_gradient(const ScalarField& H, const Vec& x, const Vec& xp,
                      double coincidence_tol = 1e-14);

/// Dispatch on the strategy selector.
Vec discrete_gradient(const DiscreteGradientKind& kind, const ScalarField& H,
                      const Vec& x, const Vec& xp);

/// Max violation of the secant identity dgH^T (x'-x) = H(x') - H(x) over the
/// sample pairs, and of consistency dgH(x,x) = grad H(x), both relative to the
/// sample's scale.
struct DiscreteGradientReport {
    double max_secant_violation = 0.0;
    double max_consistency_violation = 0.0;
};

DiscreteGradientReport verify_discrete_gradient(
    const DiscreteGradientKind& kind, const ScalarField& H,
    const std::vector<std::pair<Vec, Vec>>& pairs);

}  // namespace nonholo
