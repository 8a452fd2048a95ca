// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "nonholo/types.hpp"

namespace nonholo {

struct NewtonResult {
    Vec x;
    int iterations = 0;
    double residual_norm = 0.0;  // |F(x)|_inf at exit
};

/// Newton iteration with forward-difference Jacobian (step 1e-7 * (1 + |x|)).
/// Converged when |F(x)|_inf <= tol * (1 + |x|_inf).
NewtonResult solve_implicit(const std::function<Vec(const Vec&)>& residual,
                            const Vec& guess, double tol = 1e-12, int max_iter = 50);

}  // namespace nonholo
