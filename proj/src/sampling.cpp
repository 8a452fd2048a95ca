// SPDX-License-Identifier: Apache-2.0
#include "nonholo/sampling.hpp"

#include <cmath>

#include "nonholo/qr_diff.hpp"
#include "nonholo/rng.hpp"

namespace nonholo {

CanonicalState sample_initial_state(const MechanicalSystem& sys, std::uint64_t seed,
                                    double target_energy, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    const int n = sys.n;
    const int m = sys.n - sys.k;
    for (int attempt = 0; attempt < 100; ++attempt) {
        Vec q(n);
        for (int i = 0; i < n; ++i) q[i] = rng.uniform(-1.0, 1.0);
        const double V = sys.potential(q);
        if (target_energy < V) continue;

        Vec d(m);
        for (int a = 0; a < m; ++a) d[a] = rng.normal();
        if (d.norm() == 0.0) continue;
        d.normalize();

        const SignVector s = default_signs(sys.constraints(q));
        const Mat X = qr_orthogonal_factor(sys.constraints(q), s).rightCols(m);
        const Mat g_red = X.transpose() * sys.metric(q) * X;
        // H = 1/2 s^2 d^T g_red^{-1} d + V(q) = target: solve the scalar quadratic.
        const double c2 = 0.5 * d.dot(Eigen::LDLT<Mat>(g_red).solve(d));
        const double scale = std::sqrt((target_energy - V) / c2);

        const ReducedBasis basis{m, [X](const Vec&) { return X; }, nullptr};
        return p_from_rho(sys, basis, {q, scale * d});
    }
    throw ConfigError("sample_initial_state: target energy infeasible after 100 resamples");
}

Vec sample_reduced_state(const SkewGradientSystem& sys, std::uint64_t seed,
                         double target_energy, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    Vec d(sys.N);
    for (int i = 0; i < sys.N; ++i) d[i] = rng.normal();
    d.normalize();
    // Bracket then bisect H(s d) = target on s >= 0.
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (sys.H.value(hi * d) < target_energy) {
        hi *= 2.0;
        if (++guard > 200) throw ConfigError("sample_reduced_state: energy unreachable");
    }
    if (sys.H.value(lo * d) > target_energy)
        throw ConfigError("sample_reduced_state: target below H(0)");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sys.H.value(mid * d) < target_energy ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) * d;
}

}  // namespace nonholo
