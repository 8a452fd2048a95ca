// SPDX-License-Identifier: Apache-2.0
#include "nonholo/discrete_gradient.hpp"

#include <cmath>

namespace nonholo {

std::pair<Vec, Vec> gauss_legendre_01(int nodes) {
    if (nodes < 1) throw ConfigError("gauss_legendre_01: nodes must be >= 1");
    // Newton iteration on P_n over [-1, 1], then map to [0, 1].
    Vec x(nodes), w(nodes);
    for (int i = 0; i < nodes; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (nodes + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            if (nodes == 1) { p1 = t; }
            for (int j = 2; j <= nodes; ++j) {
                const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double pn = (nodes == 1) ? t : p1;
            const double pn1 = (nodes == 1) ? 1.0 : p0;
            dp = nodes * (t * pn - pn1) / (t * t - 1.0);
            const double dt = pn / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 + t);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // weight on [-1,1] is 2/..., halved by the map
    }
    return {x, w};
}

Vec avf_gradient(const ScalarField& H, const Vec& x, const Vec& xp, int nodes) {
    const auto [xi, w] = gauss_legendre_01(nodes);
    Vec out = Vec::Zero(x.size());
    for (int i = 0; i < nodes; ++i)
        out += w[i] * H.gradient((1.0 - xi[i]) * x + xi[i] * xp);
    return out;
}

Vec gonzalez_gradient(const ScalarField& H, const Vec& x, const Vec& xp,
                      double coincidence_tol) {
    const Vec mid = 0.5 * (x + xp);
    const Vec d = xp - x;
    const double dn2 = d.squaredNorm();
    const Vec gm = H.gradient(mid);
    if (std::sqrt(dn2) <= coincidence_tol * (1.0 + x.norm())) return gm;
    const double corr = H.value(xp) - H.value(x) - gm.dot(d);
    return gm + (corr / dn2) * d;
}

Vec itoh_abe_gradient(const ScalarField& H, const Vec& x, const Vec& xp,
                      double coincidence_tol) {
    const int N = static_cast<int>(x.size());
    Vec out(N);
    Vec mixed = x;  // (x'_1, ..., x'_{i-1}, x_i, ..., x_N) as i advances
    for (int i = 0; i < N; ++i) {
        const double di = xp[i] - x[i];
        if (std::abs(di) > coincidence_tol * (1.0 + std::abs(x[i]))) {
            const double lo = H.value(mixed);
            mixed[i] = xp[i];
            out[i] = (H.value(mixed) - lo) / di;
        } else {
            out[i] = H.gradient(mixed)[i];
            mixed[i] = xp[i];
        }
    }
    return out;
}

Vec discrete_gradient(const DiscreteGradientKind& kind, const ScalarField& H,
                      const Vec& x, const Vec& xp) {
    switch (kind.tag) {
        case DiscreteGradientTag::AVF:
            return avf_gradient(H, x, xp, kind.avf_nodes);
        case DiscreteGradientTag::Gonzalez:
            return gonzalez_gradient(H, x, xp, kind.coincidence_tol);
        case DiscreteGradientTag::CoordinateIncrement:
            return itoh_abe_gradient(H, x, xp, kind.coincidence_tol);
    }
    throw ConfigError("discrete_gradient: unknown tag");
}

DiscreteGradientReport verify_discrete_gradient(
    const DiscreteGradientKind& kind, const ScalarField& H,
    const std::vector<std::pair<Vec, Vec>>& pairs) {
    DiscreteGradientReport rep;
    for (const auto& [x, xp] : pairs) {
        const Vec dg = discrete_gradient(kind, H, x, xp);
        const double dH = H.value(xp) - H.value(x);
        const double scale = 1.0 + std::abs(H.value(x)) + std::abs(H.value(xp));
        rep.max_secant_violation =
            std::max(rep.max_secant_violation, std::abs(dg.dot(xp - x) - dH) / scale);
        const Vec at_x = discrete_gradient(kind, H, x, x);
        const Vec g = H.gradient(x);
        rep.max_consistency_violation =
            std::max(rep.max_consistency_violation,
                     (at_x - g).lpNorm<Eigen::Infinity>() / (1.0 + g.lpNorm<Eigen::Infinity>()));
    }
    return rep;
}

}  // namespace nonholo
