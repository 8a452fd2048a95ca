// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace nonholo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Third-order tensor stored as one matrix slice per differentiation index:
/// T[i](j, k) = d M(j, k) / d q^i.
using Tensor3 = std::vector<Mat>;

/// Point on T*Q in canonical coordinates.
struct CanonicalState {
    Vec q;
    Vec p;
};

/// Point on D* in adapted coordinates (q, rho).
struct ReducedState {
    Vec q;
    Vec rho;
};

struct SolverDiverged : std::runtime_error {
    explicit SolverDiverged(const std::string& what) : std::runtime_error(what) {}
};

struct SingularJacobian : std::runtime_error {
    explicit SingularJacobian(const std::string& what) : std::runtime_error(what) {}
};

struct RankDeficient : std::runtime_error {
    explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace nonholo
