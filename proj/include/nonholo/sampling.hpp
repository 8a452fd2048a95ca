// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "nonholo/systems.hpp"

namespace nonholo {

/// Random constrained state with prescribed energy: q uniform on [-1,1]^n,
/// momentum direction uniform on the sphere inside FL(D), magnitude scaled so
/// H = target_energy. Resamples q (up to 100 times) when target_energy < V(q).
/// Same (seed, stream) gives a bit-identical state.
CanonicalState sample_initial_state(const MechanicalSystem& sys, std::uint64_t seed,
                                    double target_energy, std::uint64_t stream = 0);

/// Reduced-space variant for systems without a canonical form: rho direction
/// uniform on the sphere, magnitude solved so H(s * d) = target_energy.
Vec sample_reduced_state(const SkewGradientSystem& sys, std::uint64_t seed,
                         double target_energy, std::uint64_t stream = 0);

}  // namespace nonholo
