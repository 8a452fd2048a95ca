// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "nonholo/mechanical.hpp"
#include "nonholo/skew_gradient.hpp"

namespace nonholo {

/// One example system: its canonical description and, where available, the
/// analytically reduced skew-gradient form together with the adapted basis
/// the reduction used.
struct SystemCatalogEntry {
    std::string name;
    std::optional<MechanicalSystem> canonical;
    std::optional<SkewGradientSystem> reduced;
    std::optional<ReducedBasis> hand_basis;
};

/// Upright disk rolling on the plane; coordinates (x1, x2, theta, phi).
SystemCatalogEntry make_rolling_disk(double mass = 1.0, double r = 1.0,
                                     double J_theta = 1.0, double J_phi = 1.0);

/// Chaotic quartic system on R^{2n+1}, coordinates (x, w_1..w_n, z_1..z_n),
/// single constraint xdot + sum w_i zdot_i = 0.
SystemCatalogEntry make_chaotic_quartic(int n_param = 3);

/// Chaplygin sleigh on SE(2), coordinates (x1, x2, theta).
SystemCatalogEntry make_chaplygin_sleigh(double mass = 1.0, double a = 1.0, double J = 8.0);

/// Euler-Poincare-Suslov problem on so(3); pure momentum dynamics, reduced
/// form only (Lie-algebra base, no canonical T*Q description).
SystemCatalogEntry make_suslov(double I11 = 1.0, double I22 = 2.0, double I33 = 3.0,
                               double I13 = 0.1, double I23 = 0.2);

/// Continuous gearbox driven by an asymmetric pendulum; canonical form only.
/// potential_sign scales the displayed V before it enters H = T + sign * V.
/// The default +1 takes V as the potential energy (H bounded below); -1 gives
/// the literal H = T - V, whose exact flow is a runaway (inverted wells).
SystemCatalogEntry make_gearbox_pendulum(double potential_sign = 1.0);

/// Catalog lookup by name: "rolling-disk", "chaotic-quartic",
/// "chaplygin-sleigh", "suslov", "gearbox-pendulum".
SystemCatalogEntry make_system(const std::string& name);
std::vector<std::string> system_names();

}  // namespace nonholo
