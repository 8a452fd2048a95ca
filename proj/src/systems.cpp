// SPDX-License-Identifier: Apache-2.0
#include "nonholo/systems.hpp"

#include <cmath>

namespace nonholo {

namespace {

Tensor3 zero_tensor(int slices, int rows, int cols) {
    return Tensor3(slices, Mat::Zero(rows, cols));
}

void require_positive(double v, const char* name) {
    if (v <= 0.0) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace

SystemCatalogEntry make_rolling_disk(double mass, double r, double J_theta, double J_phi) {
    require_positive(mass, "mass");
    require_positive(r, "r");
    require_positive(J_theta, "J_theta");
    require_positive(J_phi, "J_phi");

    const int n = 4, k = 2;
    MechanicalSystem sys;
    sys.n = n;
    sys.k = k;
    const Vec diag = (Vec(4) << mass, mass, J_theta, J_phi).finished();
    sys.metric = [diag](const Vec&) -> Mat { return diag.asDiagonal(); };
    sys.metric_inv = [diag](const Vec&) -> Mat { return diag.cwiseInverse().asDiagonal(); };
    sys.metric_inv_deriv = [n](const Vec&) { return zero_tensor(n, n, n); };
    sys.potential = [](const Vec&) { return 0.0; };
    sys.potential_grad = [n](const Vec&) -> Vec { return Vec::Zero(n); };
    sys.constraints = [r](const Vec& q) -> Mat {
        Mat mu = Mat::Zero(4, 2);
        mu(0, 0) = 1.0;
        mu(3, 0) = -r * std::cos(q[2]);
        mu(1, 1) = 1.0;
        mu(3, 1) = -r * std::sin(q[2]);
        return mu;
    };
    sys.constraints_deriv = [r, n, k](const Vec& q) {
        Tensor3 d = zero_tensor(n, n, k);
        d[2](3, 0) = r * std::sin(q[2]);
        d[2](3, 1) = -r * std::cos(q[2]);
        return d;
    };

    ReducedBasis basis;
    basis.m = 2;
    basis.X = [r](const Vec& q) -> Mat {
        Mat X = Mat::Zero(4, 2);
        X(0, 0) = r * std::cos(q[2]);
        X(1, 0) = r * std::sin(q[2]);
        X(3, 0) = 1.0;
        X(2, 1) = 1.0;
        return X;
    };
    basis.dX = [r](const Vec& q) {
        Tensor3 d = zero_tensor(4, 4, 2);
        d[2](0, 0) = -r * std::sin(q[2]);
        d[2](1, 0) = r * std::cos(q[2]);
        return d;
    };

    const double Jp = mass * r * r + J_phi;
    SkewGradientSystem red;
    red.N = 6;
    red.H = {[Jp, J_theta](const Vec& z) {
                 return 0.5 * (z[4] * z[4] / Jp + z[5] * z[5] / J_theta);
             },
             [Jp, J_theta](const Vec& z) -> Vec {
                 Vec g = Vec::Zero(6);
                 g[4] = z[4] / Jp;
                 g[5] = z[5] / J_theta;
                 return g;
             }};
    red.Pi = [r](const Vec& z) -> Mat {
        Mat P = Mat::Zero(6, 6);
        P(0, 4) = r * std::cos(z[2]);
        P(1, 4) = r * std::sin(z[2]);
        P(2, 5) = 1.0;
        P(3, 4) = 1.0;
        Mat S = P - P.transpose();  // skew completion of the upper blocks
        return S;
    };
    red.structure = ReducedStructure{4, 2, sys.constraints};

    return {"rolling-disk", std::move(sys), std::move(red), std::move(basis)};
}

SystemCatalogEntry make_chaotic_quartic(int np) {
    if (np < 1) throw ConfigError("chaotic-quartic: n_param must be >= 1");
    const int n = 2 * np + 1;  // coordinates (x, w_1..w_np, z_1..z_np)
    const int k = 1;
    const int m = 2 * np;

    const auto potential = [np](const Vec& q) {
        double V = 0.5 * q.squaredNorm();
        if (np >= 2) V += 0.5 * q[np + 1] * q[np + 1] * q[np + 2] * q[np + 2];
        for (int i = 1; i <= np; ++i) V += 0.5 * q[i] * q[i] * q[np + i] * q[np + i];
        return V;
    };
    const auto potential_grad = [np, n](const Vec& q) -> Vec {
        Vec g = q;
        for (int i = 1; i <= np; ++i) {
            g[i] += q[i] * q[np + i] * q[np + i];        // w_i z_i^2
            g[np + i] += q[i] * q[i] * q[np + i];        // w_i^2 z_i
        }
        if (np >= 2) {
            g[np + 1] += q[np + 1] * q[np + 2] * q[np + 2];
            g[np + 2] += q[np + 1] * q[np + 1] * q[np + 2];
        }
        return g;
    };

    MechanicalSystem sys;
    sys.n = n;
    sys.k = k;
    sys.metric = [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
    sys.metric_inv = [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
    sys.metric_inv_deriv = [n](const Vec&) { return zero_tensor(n, n, n); };
    sys.potential = potential;
    sys.potential_grad = potential_grad;
    sys.constraints = [np, n](const Vec& q) -> Mat {
        Mat mu = Mat::Zero(n, 1);
        mu(0, 0) = 1.0;
        for (int i = 1; i <= np; ++i) mu(np + i, 0) = q[i];
        return mu;
    };
    sys.constraints_deriv = [np, n, k](const Vec&) {
        Tensor3 d = zero_tensor(n, n, k);
        for (int i = 1; i <= np; ++i) d[i](np + i, 0) = 1.0;
        return d;
    };

    // Hand basis: X_a = d/dw_a (a = 1..np), X_{np+a} = w_a d/dx - d/dz_a.
    ReducedBasis basis;
    basis.m = m;
    basis.X = [np, n, m](const Vec& q) -> Mat {
        Mat X = Mat::Zero(n, m);
        for (int a = 1; a <= np; ++a) {
            X(a, a - 1) = 1.0;
            X(0, np + a - 1) = q[a];
            X(np + a, np + a - 1) = -1.0;
        }
        return X;
    };
    basis.dX = [np, n, m](const Vec&) {
        Tensor3 d = zero_tensor(n, n, m);
        for (int a = 1; a <= np; ++a) d[a](0, np + a - 1) = 1.0;
        return d;
    };

    // Analytic reduced system: zeta = (x, w, z, rho_1..rho_{2np}),
    // kappa = w^T eta / (1 + w^T w), eta = (rho_{np+1}, ..., rho_{2np}).
    SkewGradientSystem red;
    red.N = n + m;
    red.H = {[np, n, potential](const Vec& zt) {
                 const Vec w = zt.segment(1, np);
                 const Vec eta = zt.tail(np);
                 const double wTeta = w.dot(eta);
                 const double kin = 0.5 * zt.segment(n, np).squaredNorm() +
                                    0.5 * (eta.squaredNorm() - wTeta * wTeta / (1.0 + w.squaredNorm()));
                 return kin + potential(zt.head(n));
             },
             [np, n, m, potential_grad](const Vec& zt) -> Vec {
                 const Vec w = zt.segment(1, np);
                 const Vec eta = zt.tail(np);
                 const double kappa = w.dot(eta) / (1.0 + w.squaredNorm());
                 Vec g(n + m);
                 g.head(n) = potential_grad(zt.head(n));
                 g.segment(1, np) += -kappa * eta + kappa * kappa * w;
                 g.segment(n, np) = zt.segment(n, np);
                 g.tail(np) = eta - kappa * w;
                 return g;
             }};
    red.Pi = [np, n, m](const Vec& zt) -> Mat {
        const Vec w = zt.segment(1, np);
        const Vec eta = zt.tail(np);
        const double kappa = w.dot(eta) / (1.0 + w.squaredNorm());
        Mat P = Mat::Zero(n + m, n + m);
        P.block(0, n + np, 1, np) = w.transpose();
        P.block(1, n, np, np) = Mat::Identity(np, np);
        P.block(np + 1, n + np, np, np) = -Mat::Identity(np, np);
        P.block(n, n + np, np, np) = -kappa * Mat::Identity(np, np);
        Mat S = P - P.transpose();
        return S;
    };
    red.structure = ReducedStructure{n, m, sys.constraints};

    return {"chaotic-quartic", std::move(sys), std::move(red), std::move(basis)};
}

SystemCatalogEntry make_chaplygin_sleigh(double mass, double a, double J) {
    require_positive(mass, "mass");
    require_positive(J, "J");

    const int n = 3, k = 1;
    const double Jma = J + mass * a * a;

    const auto metric = [mass, a, Jma](const Vec& q) -> Mat {
        const double st = std::sin(q[2]), ct = std::cos(q[2]);
        Mat g(3, 3);
        g << mass, 0.0, -mass * a * st,
             0.0, mass, mass * a * ct,
             -mass * a * st, mass * a * ct, Jma;
        return g;
    };
    const auto metric_dtheta = [mass, a](const Vec& q) -> Mat {
        const double st = std::sin(q[2]), ct = std::cos(q[2]);
        Mat d = Mat::Zero(3, 3);
        d(0, 2) = d(2, 0) = -mass * a * ct;
        d(1, 2) = d(2, 1) = -mass * a * st;
        return d;
    };

    MechanicalSystem sys;
    sys.n = n;
    sys.k = k;
    sys.metric = metric;
    sys.metric_inv = [metric](const Vec& q) -> Mat { return metric(q).inverse(); };
    sys.metric_inv_deriv = [metric, metric_dtheta, n](const Vec& q) {
        Tensor3 d = zero_tensor(n, n, n);
        const Mat ginv = metric(q).inverse();
        d[2] = -ginv * metric_dtheta(q) * ginv;
        return d;
    };
    sys.potential = [](const Vec&) { return 0.0; };
    sys.potential_grad = [n](const Vec&) -> Vec { return Vec::Zero(n); };
    sys.constraints = [](const Vec& q) -> Mat {
        Mat mu(3, 1);
        mu << -std::sin(q[2]), std::cos(q[2]), 0.0;
        return mu;
    };
    sys.constraints_deriv = [n, k](const Vec& q) {
        Tensor3 d = zero_tensor(n, n, k);
        d[2](0, 0) = -std::cos(q[2]);
        d[2](1, 0) = -std::sin(q[2]);
        return d;
    };

    // g-orthonormal adapted basis.
    const double inv_sqrtJma = 1.0 / std::sqrt(Jma);
    const double inv_sqrtm = 1.0 / std::sqrt(mass);
    ReducedBasis basis;
    basis.m = 2;
    basis.X = [inv_sqrtJma, inv_sqrtm](const Vec& q) -> Mat {
        Mat X = Mat::Zero(3, 2);
        X(2, 0) = inv_sqrtJma;
        X(0, 1) = inv_sqrtm * std::cos(q[2]);
        X(1, 1) = inv_sqrtm * std::sin(q[2]);
        return X;
    };
    basis.dX = [inv_sqrtm](const Vec& q) {
        Tensor3 d = zero_tensor(3, 3, 2);
        d[2](0, 1) = -inv_sqrtm * std::sin(q[2]);
        d[2](1, 1) = inv_sqrtm * std::cos(q[2]);
        return d;
    };

    const double C = a * std::sqrt(mass) / Jma;  // C_12^1 of the projected bracket
    SkewGradientSystem red;
    red.N = 5;
    red.H = {[](const Vec& z) { return 0.5 * (z[3] * z[3] + z[4] * z[4]); },
             [](const Vec& z) -> Vec {
                 Vec g = Vec::Zero(5);
                 g[3] = z[3];
                 g[4] = z[4];
                 return g;
             }};
    red.Pi = [inv_sqrtJma, inv_sqrtm, C](const Vec& z) -> Mat {
        Mat P = Mat::Zero(5, 5);
        P(0, 4) = inv_sqrtm * std::cos(z[2]);
        P(1, 4) = inv_sqrtm * std::sin(z[2]);
        P(2, 3) = inv_sqrtJma;
        P(3, 4) = -C * z[3];
        Mat S = P - P.transpose();
        return S;
    };
    red.structure = ReducedStructure{3, 2, sys.constraints};

    return {"chaplygin-sleigh", std::move(sys), std::move(red), std::move(basis)};
}

SystemCatalogEntry make_suslov(double I11, double I22, double I33, double I13, double I23) {
    require_positive(I11, "I11");
    require_positive(I22, "I22");
    require_positive(I33, "I33");
    (void)I33;  // enters the full inertia tensor only, not the reduced dynamics

    const double C1 = I13 / I11;  // C^1_12
    const double C2 = I23 / I22;  // C^2_12
    SkewGradientSystem red;
    red.N = 2;
    red.H = {[I11, I22](const Vec& z) {
                 return 0.5 * (z[0] * z[0] / I11 + z[1] * z[1] / I22);
             },
             [I11, I22](const Vec& z) -> Vec {
                 return (Vec(2) << z[0] / I11, z[1] / I22).finished();
             }};
    red.Pi = [C1, C2](const Vec& z) -> Mat {
        const double c = C1 * z[0] + C2 * z[1];
        Mat P(2, 2);
        P << 0.0, -c, c, 0.0;
        return P;
    };

    return {"suslov", std::nullopt, std::move(red), std::nullopt};
}

SystemCatalogEntry make_gearbox_pendulum(double potential_sign) {
    const int n = 3, k = 1;
    MechanicalSystem sys;
    sys.n = n;
    sys.k = k;
    sys.metric = [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
    sys.metric_inv = [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
    sys.metric_inv_deriv = [n](const Vec&) { return zero_tensor(n, n, n); };
    sys.potential = [potential_sign](const Vec& q) {
        const double Vdisp = 0.5 * (q[0] * q[0] + q[1] * q[1]) + std::cos(q[2]) -
                             0.2 * std::sin(2.0 * q[2]);
        return potential_sign * Vdisp;
    };
    sys.potential_grad = [potential_sign](const Vec& q) -> Vec {
        Vec g(3);
        g << q[0], q[1], -std::sin(q[2]) - 0.4 * std::cos(2.0 * q[2]);
        return potential_sign * g;
    };
    sys.constraints = [](const Vec& q) -> Mat {
        Mat mu(3, 1);
        mu << 1.0, std::sin(q[2]), 0.0;
        return mu;
    };
    sys.constraints_deriv = [n, k](const Vec& q) {
        Tensor3 d = zero_tensor(n, n, k);
        d[2](1, 0) = std::cos(q[2]);
        return d;
    };

    return {"gearbox-pendulum", std::move(sys), std::nullopt, std::nullopt};
}

SystemCatalogEntry make_system(const std::string& name) {
    if (name == "rolling-disk") return make_rolling_disk();
    if (name == "chaotic-quartic") return make_chaotic_quartic();
    if (name == "chaplygin-sleigh") return make_chaplygin_sleigh();
    if (name == "suslov") return make_suslov();
    if (name == "gearbox-pendulum") return make_gearbox_pendulum();
    throw ConfigError("unknown system: " + name);
}

std::vector<std::string> system_names() {
    return {"rolling-disk", "chaotic-quartic", "chaplygin-sleigh", "suslov",
            "gearbox-pendulum"};
}

}  // namespace nonholo
