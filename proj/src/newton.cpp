// SPDX-License-Identifier: Apache-2.0
#include "nonholo/newton.hpp"

namespace nonholo {

NewtonResult solve_implicit(const std::function<Vec(const Vec&)>& residual,
                            const Vec& guess, double tol, int max_iter) {
    if (tol <= 0.0 || max_iter < 1) throw ConfigError("solve_implicit: bad tol/max_iter");
    const int N = static_cast<int>(guess.size());
    Vec x = guess;
    Vec F = residual(x);
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        const double fnorm = F.lpNorm<Eigen::Infinity>();
        if (fnorm == 0.0) return {x, it, fnorm};
        if (fnorm <= tol * (1.0 + x.lpNorm<Eigen::Infinity>())) {
            // One polishing iteration after convergence: the quadratic
            // contraction pushes the residual to arithmetic noise instead of
            // leaving it just under the threshold.
            if (converged) return {x, it, fnorm};
            converged = true;
        }

        const double hj = 1e-7 * (1.0 + x.norm());
        Mat J(N, N);
        Vec xh = x;
        for (int j = 0; j < N; ++j) {
            xh[j] += hj;
            J.col(j) = (residual(xh) - F) / hj;
            xh[j] = x[j];
        }
        Eigen::PartialPivLU<Mat> lu(J);
        const Vec dx = lu.solve(-F);
        if (!dx.allFinite())
            throw SingularJacobian("solve_implicit: singular finite-difference Jacobian");
        const Vec x_next = x + dx;
        const Vec F_next = residual(x_next);
        if (converged && F_next.lpNorm<Eigen::Infinity>() >= F.lpNorm<Eigen::Infinity>())
            return {x, it + 1, F.lpNorm<Eigen::Infinity>()};
        x = x_next;
        F = F_next;
    }
    const double fnorm = F.lpNorm<Eigen::Infinity>();
    if (fnorm <= tol * (1.0 + x.lpNorm<Eigen::Infinity>()))
        return {x, max_iter, fnorm};
    throw SolverDiverged("solve_implicit: no convergence after " + std::to_string(max_iter) +
                         " iterations, residual " + std::to_string(fnorm));
}

}  // namespace nonholo
