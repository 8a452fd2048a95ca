// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "nonholo/dla.hpp"
#include "nonholo/systems.hpp"

namespace nonholo {

struct ExperimentConfig {
    std::string system = "chaotic-quartic";
    std::string method = "dg-gonzalez";  // dg-avf | dg-gonzalez | dg-itoh-abe |
                                         // gonzalez-f | gonzalez-r | gonzalez-r-fd | dla
    double h = 0.05;
    double t_end = 10.0;
    std::uint64_t seed = 1;
    double target_energy = 3.06;
    std::vector<double> initial_state;  // explicit packed state; empty -> sampled
    double solver_tol = 1e-12;
    int max_iter = 50;
    int avf_nodes = 4;
    double fd_h = -1.0;                 // gonzalez-r-fd difference step; <0 means use h
    std::string dla_force_at = "midpoint";  // left | midpoint
    std::string out;

    void validate() const;  // method/system compatibility, positivity
};

/// Result of one step inside a generic run, in the method's own state space.
struct StepOutcome {
    Vec state;
    int solver_iterations = 0;
    Vec constraint_res;  // per-step constraint diagnostic (may be empty)
};

/// Uniform driver around one integration method on one system.
struct MethodRunner {
    int dim = 0;
    int n_constraints = 0;
    std::vector<std::string> state_columns;
    std::function<StepOutcome(const Vec&)> step;
    std::function<double(const Vec&)> energy;
    std::function<Vec(const Vec&)> initial_constraint;  // residual columns for row 0
};

MethodRunner make_runner(const SystemCatalogEntry& entry, const ExperimentConfig& cfg);

/// Initial packed state: explicit from cfg, else sampled at cfg.target_energy.
Vec resolve_initial_state(const SystemCatalogEntry& entry, const ExperimentConfig& cfg,
                          std::uint64_t stream = 0);

struct IntegrateSummary {
    int steps = 0;
    double max_rel_energy_err = 0.0;
    double max_constraint_res = 0.0;
};

/// Fixed-step run writing one CSV row per state (17 significant digits).
IntegrateSummary run_integrate(const ExperimentConfig& cfg);

struct OrderStudyResult {
    std::vector<double> h;
    std::vector<double> global_error;  // at t_end vs the tiny-step reference
    double slope = 0.0;                // least-squares slope of log err vs log h
    bool degenerate = false;           // errors at reference scale, slope unreliable
};

OrderStudyResult run_order_study(const ExperimentConfig& cfg, const std::vector<double>& h_list,
                                 double reference_factor = 20.0);

/// Energy-error variance across an ensemble, scaled by h^4; delegates to the
/// DLA experiment for method "dla" and reuses the same harness for the
/// discrete-gradient methods (round-off-scale contrast).
std::vector<VarianceRow> run_variance_study(const ExperimentConfig& cfg, int ensemble,
                                            const std::vector<double>& h_list,
                                            double record_dt = 0.0);

struct SleighStabilityRow {
    double rho1_initial;
    double rho1_final;
    double rho2_final;
    bool converged_to_stable;  // |rho1| -> 0 with rho2 > 0
};

struct SleighStabilityResult {
    std::vector<SleighStabilityRow> rows;
    double lambda1 = 0.0;      // (2(J+ma^2) - h a sqrt(m) rho2) / (2(J+ma^2) + h a sqrt(m) rho2)
    double h_bound = 0.0;      // |2(J+ma^2) / (a sqrt(m) rho2)|
    bool bound_satisfied = true;
};

SleighStabilityResult run_sleigh_stability(double J, double a, double mass, double h,
                                           double rho2, const std::vector<double>& rho1_list,
                                           int steps, const Vec& q0,
                                           const std::string& out = "");

/// CSV helpers shared by the CLI; full 17-significant-digit serialization.
std::string format_full(double v);

}  // namespace nonholo
