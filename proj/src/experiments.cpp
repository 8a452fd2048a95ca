// SPDX-License-Identifier: Apache-2.0
#include "nonholo/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nonholo/canonical.hpp"
#include "nonholo/parallel.hpp"
#include "nonholo/sampling.hpp"

namespace nonholo {

namespace {

bool is_reduced_method(const std::string& m) {
    return m == "dg-avf" || m == "dg-gonzalez" || m == "dg-itoh-abe";
}

bool is_canonical_method(const std::string& m) {
    return m == "gonzalez-f" || m == "gonzalez-r" || m == "gonzalez-r-fd" || m == "dla";
}

DiscreteGradientKind dg_kind_for(const ExperimentConfig& cfg) {
    DiscreteGradientKind kind;
    kind.avf_nodes = cfg.avf_nodes;
    if (cfg.method == "dg-avf") kind.tag = DiscreteGradientTag::AVF;
    else if (cfg.method == "dg-itoh-abe") kind.tag = DiscreteGradientTag::CoordinateIncrement;
    else kind.tag = DiscreteGradientTag::Gonzalez;
    return kind;
}

StepConfig step_config_for(const ExperimentConfig& cfg) {
    StepConfig scfg;
    scfg.h = cfg.h;
    scfg.dg = dg_kind_for(cfg);
    scfg.pi_approx = PiApprox::Midpoint;
    scfg.solver_tol = cfg.solver_tol;
    scfg.max_iter = cfg.max_iter;
    return scfg;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (h <= 0.0) throw ConfigError("config: h must be positive");
    if (t_end <= 0.0) throw ConfigError("config: t_end must be positive");
    if (solver_tol <= 0.0) throw ConfigError("config: solver_tol must be positive");
    if (max_iter < 1) throw ConfigError("config: max_iter must be >= 1");
    if (avf_nodes < 1) throw ConfigError("config: avf_nodes must be >= 1");
    if (!is_reduced_method(method) && !is_canonical_method(method))
        throw ConfigError("config: unknown method " + method);
    if (dla_force_at != "left" && dla_force_at != "midpoint")
        throw ConfigError("config: dla_force_at must be left or midpoint");
    const SystemCatalogEntry entry = make_system(system);
    if (is_reduced_method(method) && !entry.reduced)
        throw ConfigError("config: " + system + " has no reduced form for " + method);
    if (is_canonical_method(method) && !entry.canonical)
        throw ConfigError("config: " + system + " has no canonical form for " + method);
}

MethodRunner make_runner(const SystemCatalogEntry& entry, const ExperimentConfig& cfg) {
    MethodRunner runner;
    const StepConfig scfg = step_config_for(cfg);

    if (is_reduced_method(cfg.method)) {
        const SkewGradientSystem red = *entry.reduced;
        runner.dim = red.N;
        runner.energy = red.H.value;
        const int k = entry.canonical ? entry.canonical->k : 0;
        runner.n_constraints = red.structure ? k : 0;
        if (red.structure) {
            for (int i = 1; i <= red.structure->n; ++i)
                runner.state_columns.push_back("q" + std::to_string(i));
            for (int a = 1; a <= red.structure->m; ++a)
                runner.state_columns.push_back("rho" + std::to_string(a));
        } else {
            for (int a = 1; a <= red.N; ++a)
                runner.state_columns.push_back("rho" + std::to_string(a));
        }
        const int nc = runner.n_constraints;
        runner.initial_constraint = [nc](const Vec&) -> Vec { return Vec::Zero(nc); };
        runner.step = [red, scfg](const Vec& zeta) -> StepOutcome {
            auto [zp, diag] = dg_step(red, zeta, scfg);
            return {std::move(zp), diag.solver_iterations,
                    std::move(diag.discrete_constraint_residual)};
        };
        return runner;
    }

    const MechanicalSystem sys = *entry.canonical;
    const int n = sys.n;
    runner.dim = 2 * n;
    runner.n_constraints = sys.k;
    for (int i = 1; i <= n; ++i) runner.state_columns.push_back("q" + std::to_string(i));
    for (int i = 1; i <= n; ++i) runner.state_columns.push_back("p" + std::to_string(i));
    runner.energy = [sys, n](const Vec& x) { return sys.hamiltonian({x.head(n), x.tail(n)}); };
    const auto pointwise = [sys, n](const Vec& x) -> Vec {
        return constraint_residual(sys, {x.head(n), x.tail(n)});
    };
    runner.initial_constraint = pointwise;

    if (cfg.method == "gonzalez-f") {
        runner.step = [sys, scfg, pointwise, n](const Vec& x) -> StepOutcome {
            const MultiplierStepResult r = gonzalez_f_step(sys, {x.head(n), x.tail(n)}, scfg);
            Vec out(2 * n);
            out << r.z.q, r.z.p;
            return {out, r.solver_iterations, pointwise(out)};
        };
    } else if (cfg.method == "gonzalez-r") {
        runner.step = [sys, scfg, pointwise, n](const Vec& x) -> StepOutcome {
            const CanonicalStepResult r = gonzalez_r_step(sys, {x.head(n), x.tail(n)}, scfg);
            Vec out(2 * n);
            out << r.z.q, r.z.p;
            return {out, r.diag.solver_iterations, pointwise(out)};
        };
    } else if (cfg.method == "gonzalez-r-fd") {
        const double fd_h = cfg.fd_h > 0.0 ? cfg.fd_h : cfg.h;
        runner.step = [sys, scfg, pointwise, n, fd_h](const Vec& x) -> StepOutcome {
            const CanonicalStepResult r =
                gonzalez_r_fd_step(sys, {x.head(n), x.tail(n)}, scfg, fd_h);
            Vec out(2 * n);
            out << r.z.q, r.z.p;
            return {out, r.diag.solver_iterations, pointwise(out)};
        };
    } else {  // dla
        const ConstraintForceAt at = (cfg.dla_force_at == "midpoint")
                                         ? ConstraintForceAt::Midpoint
                                         : ConstraintForceAt::Left;
        runner.step = [sys, scfg, pointwise, n, at](const Vec& x) -> StepOutcome {
            const DlaStepResult r =
                dla_step(sys, {x.head(n), x.tail(n)}, scfg.h, scfg.solver_tol, scfg.max_iter, at);
            Vec out(2 * n);
            out << r.z.q, r.z.p;
            return {out, r.solver_iterations, pointwise(out)};
        };
    }
    return runner;
}

Vec resolve_initial_state(const SystemCatalogEntry& entry, const ExperimentConfig& cfg,
                          std::uint64_t stream) {
    if (!cfg.initial_state.empty()) {
        Vec x(cfg.initial_state.size());
        for (std::size_t i = 0; i < cfg.initial_state.size(); ++i) x[i] = cfg.initial_state[i];
        return x;
    }
    if (!entry.canonical) {
        if (!entry.reduced) throw ConfigError("resolve_initial_state: system has no dynamics");
        return sample_reduced_state(*entry.reduced, cfg.seed, cfg.target_energy, stream);
    }
    const CanonicalState z =
        sample_initial_state(*entry.canonical, cfg.seed, cfg.target_energy, stream);
    if (is_reduced_method(cfg.method)) {
        if (!entry.hand_basis)
            throw ConfigError("resolve_initial_state: no adapted basis for reduced sampling");
        const ReducedState zeta = rho_from_p(*entry.canonical, *entry.hand_basis, z);
        Vec x(zeta.q.size() + zeta.rho.size());
        x << zeta.q, zeta.rho;
        return x;
    }
    Vec x(2 * entry.canonical->n);
    x << z.q, z.p;
    return x;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

IntegrateSummary run_integrate(const ExperimentConfig& cfg) {
    cfg.validate();
    const SystemCatalogEntry entry = make_system(cfg.system);
    const MethodRunner runner = make_runner(entry, cfg);
    Vec state = resolve_initial_state(entry, cfg);
    if (state.size() != runner.dim)
        throw ConfigError("initial state has dimension " + std::to_string(state.size()) +
                          ", expected " + std::to_string(runner.dim));

    const int n_steps = static_cast<int>(std::llround(cfg.t_end / cfg.h));
    if (n_steps < 1) throw ConfigError("run_integrate: t_end/h yields no steps");

    std::ofstream csv;
    if (!cfg.out.empty()) {
        csv.open(cfg.out, std::ios::trunc);
        if (!csv) throw ConfigError("run_integrate: cannot open " + cfg.out);
        csv << "t";
        for (const auto& c : runner.state_columns) csv << "," << c;
        csv << ",H,rel_energy_err";
        for (int i = 1; i <= runner.n_constraints; ++i) csv << ",constraint_res_" << i;
        csv << ",solver_iters\n";
    }

    const double H0 = runner.energy(state);
    const double H0_scale = (H0 == 0.0) ? 1.0 : std::abs(H0);
    IntegrateSummary summary;

    const auto emit = [&](double t, const Vec& x, const Vec& cres, int iters) {
        const double H = runner.energy(x);
        const double rel = std::abs(H - H0) / H0_scale;
        summary.max_rel_energy_err = std::max(summary.max_rel_energy_err, rel);
        if (cres.size() > 0)
            summary.max_constraint_res =
                std::max(summary.max_constraint_res, cres.lpNorm<Eigen::Infinity>());
        if (!csv.is_open()) return;
        csv << format_full(t);
        for (int i = 0; i < x.size(); ++i) csv << "," << format_full(x[i]);
        csv << "," << format_full(H) << "," << format_full(rel);
        for (int i = 0; i < cres.size(); ++i) csv << "," << format_full(cres[i]);
        csv << "," << iters << "\n";
    };

    emit(0.0, state, runner.initial_constraint(state), 0);
    for (int s = 1; s <= n_steps; ++s) {
        try {
            StepOutcome out = runner.step(state);
            state = std::move(out.state);
            emit(s * cfg.h, state, out.constraint_res, out.solver_iterations);
        } catch (const std::exception& e) {
            if (!cfg.out.empty()) {
                std::ofstream sidecar(cfg.out + ".error.txt", std::ios::trunc);
                sidecar << "step " << s << " of " << n_steps << " failed\n"
                        << e.what() << "\n";
            }
            throw;
        }
    }
    summary.steps = n_steps;
    return summary;
}

OrderStudyResult run_order_study(const ExperimentConfig& cfg, const std::vector<double>& h_list,
                                 double reference_factor) {
    cfg.validate();
    if (h_list.size() < 3) throw ConfigError("order study needs at least 3 step sizes");
    const SystemCatalogEntry entry = make_system(cfg.system);
    const Vec x0 = resolve_initial_state(entry, cfg);

    const auto final_state = [&](double h) {
        ExperimentConfig c = cfg;
        c.h = h;
        const MethodRunner runner = make_runner(entry, c);
        Vec x = x0;
        const int n_steps = static_cast<int>(std::llround(cfg.t_end / h));
        for (int s = 0; s < n_steps; ++s) x = runner.step(x).state;
        return x;
    };

    double h_min = h_list.front();
    for (double h : h_list) h_min = std::min(h_min, h);
    const Vec ref = final_state(h_min / reference_factor);

    OrderStudyResult out;
    out.h = h_list;
    out.global_error.resize(h_list.size());
    std::vector<Vec> finals(h_list.size());
    parallel_for(static_cast<int>(h_list.size()),
                 [&](int i) { finals[i] = final_state(h_list[i]); });
    bool any_above_noise = false;
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        out.global_error[i] = (finals[i] - ref).lpNorm<Eigen::Infinity>();
        if (out.global_error[i] > 1e-12) any_above_noise = true;
    }
    out.degenerate = !any_above_noise;

    // Least-squares slope of log(err) vs log(h).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double N = static_cast<double>(h_list.size());
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        const double lx = std::log(h_list[i]);
        const double ly = std::log(std::max(out.global_error[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    out.slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    return out;
}

std::vector<VarianceRow> run_variance_study(const ExperimentConfig& cfg, int ensemble,
                                            const std::vector<double>& h_list,
                                            double record_dt) {
    cfg.validate();
    if (ensemble < 1) throw ConfigError("variance study needs ensemble >= 1");
    if (record_dt <= 0.0) record_dt = cfg.t_end / 20.0;
    const SystemCatalogEntry entry = make_system(cfg.system);

    if (cfg.method == "dla") {
        const MechanicalSystem& sys = *entry.canonical;
        std::vector<CanonicalState> states;
        states.reserve(ensemble);
        for (int e = 0; e < ensemble; ++e)
            states.push_back(sample_initial_state(sys, cfg.seed, cfg.target_energy, e));
        return dla_energy_variance_experiment(sys, states, h_list, cfg.t_end, record_dt);
    }

    std::vector<Vec> states;
    states.reserve(ensemble);
    for (int e = 0; e < ensemble; ++e) states.push_back(resolve_initial_state(entry, cfg, e));

    std::vector<VarianceRow> rows;
    for (const double h : h_list) {
        ExperimentConfig c = cfg;
        c.h = h;
        const MethodRunner runner = make_runner(entry, c);
        const int n_steps = static_cast<int>(std::llround(cfg.t_end / h));
        const int record_every = std::max(1, static_cast<int>(std::llround(record_dt / h)));
        const int n_records = n_steps / record_every;
        std::vector<std::vector<double>> errs(ensemble);
        parallel_for(ensemble, [&](int e) {
            Vec x = states[e];
            const double H0 = runner.energy(x);
            errs[e].reserve(n_records);
            for (int s = 1; s <= n_steps; ++s) {
                x = runner.step(x).state;
                if (s % record_every == 0) errs[e].push_back(runner.energy(x) - H0);
            }
        });
        for (int r = 0; r < n_records; ++r) {
            double mean = 0.0;
            for (int e = 0; e < ensemble; ++e) mean += errs[e][r];
            mean /= static_cast<double>(ensemble);
            double var = 0.0;
            for (int e = 0; e < ensemble; ++e) var += (errs[e][r] - mean) * (errs[e][r] - mean);
            if (ensemble > 1) var /= static_cast<double>(ensemble - 1);
            rows.push_back({h, (r + 1) * record_every * h, var / (h * h * h * h)});
        }
    }
    return rows;
}

SleighStabilityResult run_sleigh_stability(double J, double a, double mass, double h,
                                           double rho2, const std::vector<double>& rho1_list,
                                           int steps, const Vec& q0, const std::string& out) {
    if (steps < 1) throw ConfigError("sleigh stability: steps must be >= 1");
    if (q0.size() != 3) throw ConfigError("sleigh stability: q0 must have 3 entries");
    const SystemCatalogEntry entry = make_chaplygin_sleigh(mass, a, J);
    const double Jma = J + mass * a * a;
    const double asm_ = a * std::sqrt(mass);

    SleighStabilityResult res;
    res.h_bound = std::abs(2.0 * Jma / (asm_ * rho2));
    res.bound_satisfied = (h < res.h_bound);
    res.lambda1 = (2.0 * Jma - h * asm_ * rho2) / (2.0 * Jma + h * asm_ * rho2);

    StepConfig scfg;
    scfg.h = h;
    scfg.dg.tag = DiscreteGradientTag::Gonzalez;

    std::ofstream csv;
    if (!out.empty()) {
        csv.open(out, std::ios::trunc);
        csv << "rho1_initial,t,x1,x2,theta,rho1,rho2\n";
    }

    for (const double rho1 : rho1_list) {
        Vec zeta(5);
        zeta << q0[0], q0[1], q0[2], rho1, rho2;
        const Trajectory traj = integrate(*entry.reduced, zeta, scfg, steps);
        if (csv.is_open()) {
            for (std::size_t i = 0; i < traj.states.size(); ++i) {
                csv << format_full(rho1) << "," << format_full(traj.times[i]);
                for (int j = 0; j < 5; ++j) csv << "," << format_full(traj.states[i][j]);
                csv << "\n";
            }
        }
        const Vec& last = traj.states.back();
        res.rows.push_back({rho1, last[3], last[4],
                            std::abs(last[3]) < 1e-6 && last[4] > 0.0});
    }
    return res;
}

}  // namespace nonholo
