// SPDX-License-Identifier: Apache-2.0
#include "nonholo/dla.hpp"

#include <cmath>

#include "nonholo/newton.hpp"
#include "nonholo/parallel.hpp"

namespace nonholo {

namespace {

// Gradient of L(qbar, v) = 1/2 v^T g(qbar) v - V(qbar) with respect to qbar,
// using dg/dq^i = -g (dg^{-1}/dq^i) g.
Vec lagrangian_q_grad(const MechanicalSystem& sys, const Vec& qbar, const Vec& v) {
    const Mat g = sys.metric(qbar);
    const Tensor3 dginv = sys.metric_inv_deriv(qbar);
    const Vec gv = g * v;
    Vec out(sys.n);
    for (int i = 0; i < sys.n; ++i)
        out[i] = -0.5 * gv.dot(dginv[i] * gv);
    return out - sys.potential_grad(qbar);
}

}  // namespace

DlaStepResult dla_step(const MechanicalSystem& sys, const CanonicalState& z, double h,
                       double solver_tol, int max_iter, ConstraintForceAt force_at) {
    if (h == 0.0) throw ConfigError("dla_step: h must be nonzero");
    const int n = sys.n;
    const int k = sys.k;

    // Unknowns (q_{k+1}, lambda). DLA in position-momentum form:
    //   p_k + D1 L_d(q_k, q_{k+1}) = lambda_a mu^a,   mu(qbar)^T (q_{k+1} - q_k)/h = 0,
    // then p_{k+1} = D2 L_d(q_k, q_{k+1}).
    const auto residual = [&](const Vec& u) -> Vec {
        const Vec q1 = u.head(n);
        const Vec lambda = u.tail(k);
        const Vec qbar = 0.5 * (z.q + q1);
        const Vec v = (q1 - z.q) / h;
        const Vec d1 = 0.5 * h * lagrangian_q_grad(sys, qbar, v) - sys.metric(qbar) * v;
        const Vec qf = (force_at == ConstraintForceAt::Left) ? z.q : qbar;
        Vec r(n + k);
        r.head(n) = z.p + d1;
        if (k > 0) {
            // Half the constraint impulse acts on each discrete Legendre
            // transform; the other half enters the p_{k+1} recovery below.
            r.head(n) -= 0.5 * sys.constraints(qf) * lambda;
            r.tail(k) = sys.constraints(qbar).transpose() * v;
        }
        return r;
    };

    Vec guess(n + k);
    guess.head(n) = z.q + h * (sys.metric_inv(z.q) * z.p);
    guess.tail(k).setZero();
    const NewtonResult sol = solve_implicit(residual, guess, solver_tol, max_iter);

    const Vec q1 = sol.x.head(n);
    const Vec qbar = 0.5 * (z.q + q1);
    const Vec v = (q1 - z.q) / h;
    const Vec qf = (force_at == ConstraintForceAt::Left) ? z.q : qbar;
    DlaStepResult out;
    Vec p1 = 0.5 * h * lagrangian_q_grad(sys, qbar, v) + sys.metric(qbar) * v;
    if (k > 0) p1 -= 0.5 * sys.constraints(qf) * sol.x.tail(k);
    out.z = {q1, p1};
    out.lambda = sol.x.tail(k);
    out.solver_iterations = sol.iterations;
    return out;
}

std::vector<VarianceRow> dla_energy_variance_experiment(
    const MechanicalSystem& sys, const std::vector<CanonicalState>& ensemble,
    const std::vector<double>& h_list, double t_end, double record_dt) {
    std::vector<VarianceRow> rows;
    const int E = static_cast<int>(ensemble.size());
    for (const double h : h_list) {
        const int n_steps = static_cast<int>(std::llround(t_end / h));
        const int record_every = std::max(1, static_cast<int>(std::llround(record_dt / h)));
        const int n_records = n_steps / record_every;
        // errs[e][r] = H(t_r) - H(0) for ensemble member e; members run
        // concurrently, aggregation is by index so output is deterministic.
        std::vector<std::vector<double>> errs(E);
        parallel_for(E, [&](int e) {
            const double H0 = sys.hamiltonian(ensemble[e]);
            CanonicalState z = ensemble[e];
            errs[e].reserve(n_records);
            for (int s = 1; s <= n_steps; ++s) {
                z = dla_step(sys, z, h).z;
                if (s % record_every == 0) errs[e].push_back(sys.hamiltonian(z) - H0);
            }
        });
        for (int r = 0; r < n_records; ++r) {
            double mean = 0.0;
            for (int e = 0; e < E; ++e) mean += errs[e][r];
            mean /= static_cast<double>(E);
            double var = 0.0;
            for (int e = 0; e < E; ++e) var += (errs[e][r] - mean) * (errs[e][r] - mean);
            if (E > 1) var /= static_cast<double>(E - 1);
            rows.push_back({h, (r + 1) * record_every * h, var / (h * h * h * h)});
        }
    }
    return rows;
}

}  // namespace nonholo
