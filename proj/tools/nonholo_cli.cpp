// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: integrate, order-study, variance-study,
// sleigh-stability, list-systems, verify. Config file values are overridden
// by explicit flags; all data output is CSV with 17 significant digits.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nonholo/experiments.hpp"
#include "nonholo/qr_diff.hpp"
#include "nonholo/rng.hpp"
#include "nonholo/sampling.hpp"

using nlohmann::json;
using namespace nonholo;

namespace {

struct CliOptions {
    ExperimentConfig cfg;
    std::vector<double> h_list;
    int ensemble = 50;
    double record_dt = 0.0;
    double reference_factor = 20.0;
    // sleigh-stability parameters
    double J = 8.0, a = 1.0, m = 1.0, rho2 = -0.6;
    std::vector<double> rho1_list = {0.001, -0.001};
    int steps = 2000;
    std::vector<double> q0 = {-5.0, 0.0, 0.1};
};

void load_config(const std::string& path, CliOptions& opt) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    ExperimentConfig& c = opt.cfg;
    if (j.contains("system")) c.system = j["system"].get<std::string>();
    if (j.contains("method")) c.method = j["method"].get<std::string>();
    if (j.contains("h")) c.h = j["h"].get<double>();
    if (j.contains("t_end")) c.t_end = j["t_end"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("target_energy")) c.target_energy = j["target_energy"].get<double>();
    if (j.contains("initial_state")) c.initial_state = j["initial_state"].get<std::vector<double>>();
    if (j.contains("solver_tol")) c.solver_tol = j["solver_tol"].get<double>();
    if (j.contains("max_iter")) c.max_iter = j["max_iter"].get<int>();
    if (j.contains("avf_nodes")) c.avf_nodes = j["avf_nodes"].get<int>();
    if (j.contains("fd_h")) c.fd_h = j["fd_h"].get<double>();
    if (j.contains("dla_force_at")) c.dla_force_at = j["dla_force_at"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("h_list")) opt.h_list = j["h_list"].get<std::vector<double>>();
    if (j.contains("ensemble")) opt.ensemble = j["ensemble"].get<int>();
    if (j.contains("record_dt")) opt.record_dt = j["record_dt"].get<double>();
    if (j.contains("reference_factor")) opt.reference_factor = j["reference_factor"].get<double>();
    if (j.contains("J")) opt.J = j["J"].get<double>();
    if (j.contains("a")) opt.a = j["a"].get<double>();
    if (j.contains("m")) opt.m = j["m"].get<double>();
    if (j.contains("rho2")) opt.rho2 = j["rho2"].get<double>();
    if (j.contains("rho1_list")) opt.rho1_list = j["rho1_list"].get<std::vector<double>>();
    if (j.contains("steps")) opt.steps = j["steps"].get<int>();
    if (j.contains("q0")) opt.q0 = j["q0"].get<std::vector<double>>();
}

// Registers the shared flags on a subcommand; values land in the staging
// variables and are copied over the config after parsing (flags win).
struct FlagStage {
    std::string config_path, system, method, out, dla_force_at;
    double h = 0, t_end = 0, target_energy = 0, fd_h = 0;
    std::uint64_t seed = 0;
    int avf_nodes = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override its values");
        cmd->add_option("--system", system, "system name (see list-systems)");
        cmd->add_option("--method", method,
                        "dg-avf | dg-gonzalez | dg-itoh-abe | gonzalez-f | gonzalez-r | "
                        "gonzalez-r-fd | dla");
        cmd->add_option("--h", h, "step size");
        cmd->add_option("--t-end", t_end, "integration time");
        cmd->add_option("--seed", seed, "PRNG seed for sampled initial states");
        cmd->add_option("--target-energy", target_energy, "energy level for sampled states");
        cmd->add_option("--avf-nodes", avf_nodes, "Gauss-Legendre node count for dg-avf");
        cmd->add_option("--fd-h", fd_h, "difference step for gonzalez-r-fd");
        cmd->add_option("--dla-force-at", dla_force_at, "left | midpoint");
        cmd->add_option("--out", out, "output CSV path");
    }

    void apply(const CLI::App* cmd, CliOptions& opt) {
        if (!config_path.empty()) load_config(config_path, opt);
        ExperimentConfig& c = opt.cfg;
        if (cmd->count("--system")) c.system = system;
        if (cmd->count("--method")) c.method = method;
        if (cmd->count("--h")) c.h = h;
        if (cmd->count("--t-end")) c.t_end = t_end;
        if (cmd->count("--seed")) c.seed = seed;
        if (cmd->count("--target-energy")) c.target_energy = target_energy;
        if (cmd->count("--avf-nodes")) c.avf_nodes = avf_nodes;
        if (cmd->count("--fd-h")) c.fd_h = fd_h;
        if (cmd->count("--dla-force-at")) c.dla_force_at = dla_force_at;
        if (cmd->count("--out")) c.out = out;
    }
};

int cmd_integrate(CliOptions& opt) {
    const IntegrateSummary s = run_integrate(opt.cfg);
    std::cout << "steps " << s.steps << "\n"
              << "max_rel_energy_err " << format_full(s.max_rel_energy_err) << "\n"
              << "max_constraint_res " << format_full(s.max_constraint_res) << "\n";
    return 0;
}

int cmd_order_study(CliOptions& opt) {
    if (opt.h_list.empty()) opt.h_list = {0.1, 0.05, 0.025, 0.0125};
    const OrderStudyResult r = run_order_study(opt.cfg, opt.h_list, opt.reference_factor);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.cfg.out.empty()) {
        file.open(opt.cfg.out, std::ios::trunc);
        if (!file) throw ConfigError("cannot open " + opt.cfg.out);
        os = &file;
    }
    *os << "h,global_error,slope,degenerate\n";
    for (std::size_t i = 0; i < r.h.size(); ++i)
        *os << format_full(r.h[i]) << "," << format_full(r.global_error[i]) << ","
            << format_full(r.slope) << "," << (r.degenerate ? 1 : 0) << "\n";
    std::cout << "slope " << format_full(r.slope) << "\n"
              << "degenerate " << (r.degenerate ? 1 : 0) << "\n";
    return 0;
}

int cmd_variance_study(CliOptions& opt) {
    if (opt.h_list.empty()) opt.h_list = {0.1, 0.05};
    const std::vector<VarianceRow> rows =
        run_variance_study(opt.cfg, opt.ensemble, opt.h_list, opt.record_dt);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.cfg.out.empty()) {
        file.open(opt.cfg.out, std::ios::trunc);
        if (!file) throw ConfigError("cannot open " + opt.cfg.out);
        os = &file;
    }
    *os << "h,t,scaled_variance\n";
    for (const VarianceRow& r : rows)
        *os << format_full(r.h) << "," << format_full(r.t) << ","
            << format_full(r.scaled_variance) << "\n";
    return 0;
}

int cmd_sleigh_stability(CliOptions& opt) {
    const SleighStabilityResult r =
        run_sleigh_stability(opt.J, opt.a, opt.m, opt.cfg.h, opt.rho2, opt.rho1_list, opt.steps,
                             Eigen::Map<const Vec>(opt.q0.data(), opt.q0.size()), opt.cfg.out);
    if (!r.bound_satisfied)
        std::cerr << "warning: h = " << format_full(opt.cfg.h)
                  << " violates the stability bound h < " << format_full(r.h_bound) << "\n";
    std::cout << "lambda1 " << format_full(r.lambda1) << "\n"
              << "h_bound " << format_full(r.h_bound) << "\n";
    for (const SleighStabilityRow& row : r.rows)
        std::cout << "rho1_initial " << format_full(row.rho1_initial) << " rho1_final "
                  << format_full(row.rho1_final) << " rho2_final " << format_full(row.rho2_final)
                  << " converged " << (row.converged_to_stable ? 1 : 0) << "\n";
    return 0;
}

int cmd_list_systems() {
    for (const std::string& name : system_names()) std::cout << name << "\n";
    return 0;
}

// Fast invariant suites: discrete-gradient axioms, QR derivative checks,
// sampler determinism, and one energy-exact run per reduced system.
int cmd_verify(std::uint64_t seed) {
    int failures = 0;
    const auto report = [&](const std::string& name, bool ok, double worst) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " (worst " << format_full(worst)
                  << ")\n";
        if (!ok) ++failures;
    };

    {
        const SkewGradientSystem sys = *make_chaotic_quartic(3).reduced;
        CounterRng rng(seed, 7);
        std::vector<std::pair<Vec, Vec>> pairs;
        for (int trial = 0; trial < 200; ++trial) {
            Vec x(sys.N), xp(sys.N);
            for (int i = 0; i < sys.N; ++i) {
                x[i] = 2.0 * rng.uniform() - 1.0;
                xp[i] = x[i] + 0.2 * (2.0 * rng.uniform() - 1.0);
            }
            pairs.emplace_back(x, xp);
        }
        double worst = 0.0;
        for (auto tag : {DiscreteGradientTag::AVF, DiscreteGradientTag::Gonzalez,
                         DiscreteGradientTag::CoordinateIncrement}) {
            DiscreteGradientKind kind;
            kind.tag = tag;
            const DiscreteGradientReport rep = verify_discrete_gradient(kind, sys.H, pairs);
            worst = std::max(worst,
                             std::max(rep.max_secant_violation, rep.max_consistency_violation));
        }
        report("discrete-gradient axioms", worst <= 1e-9, worst);
    }

    {
        CounterRng rng(seed, 11);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 2 + static_cast<int>(rng.uniform() * 8.0);
            const int k = 1 + static_cast<int>(rng.uniform() * (n - 1));
            Mat A(n, k);
            Tensor3 dA(n, Mat(n, k));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < k; ++j) {
                    A(i, j) = 2.0 * rng.uniform() - 1.0;
                    for (int l = 0; l < n; ++l) dA[l](i, j) = 2.0 * rng.uniform() - 1.0;
                }
            const QRDiffOutput qr = qr_diff(A, dA, default_signs(A));
            worst = std::max(worst, (qr.Q.transpose() * qr.Q - Mat::Identity(n, n))
                                        .cwiseAbs()
                                        .maxCoeff());
            worst = std::max(worst, (qr.Q * qr.R - A).cwiseAbs().maxCoeff());
            for (int l = 0; l < n; ++l)
                worst = std::max(worst, (qr.dQ[l].transpose() * qr.Q +
                                         qr.Q.transpose() * qr.dQ[l])
                                            .cwiseAbs()
                                            .maxCoeff());
        }
        report("qr-diff invariants", worst <= 1e-10, worst);
    }

    {
        const MechanicalSystem sys = *make_chaotic_quartic(3).canonical;
        const CanonicalState z1 = sample_initial_state(sys, seed, 3.06, 0);
        const CanonicalState z2 = sample_initial_state(sys, seed, 3.06, 0);
        const double dq = (z1.q - z2.q).cwiseAbs().maxCoeff();
        const double dp = (z1.p - z2.p).cwiseAbs().maxCoeff();
        const double dH = std::abs(sys.hamiltonian(z1) - 3.06);
        report("sampler determinism and energy", dq == 0.0 && dp == 0.0 && dH <= 1e-12,
               std::max({dq, dp, dH}));
    }

    {
        double worst = 0.0;
        for (const std::string& name : system_names()) {
            const SystemCatalogEntry entry = make_system(name);
            if (!entry.reduced) continue;
            ExperimentConfig cfg;
            cfg.system = name;
            cfg.method = "dg-gonzalez";
            cfg.h = 0.05;
            cfg.t_end = 5.0;
            cfg.seed = seed;
            if (name == "rolling-disk") cfg.initial_state = {0.1, -0.2, 0.3, 0.4, 0.5, -0.7};
            if (name == "chaplygin-sleigh") cfg.initial_state = {0, 0, 0.1, 0.4, -0.6};
            if (name == "gearbox") cfg.initial_state = {0.1, -0.2, 0.3, 0.2, -0.1, 0.15};
            const IntegrateSummary s = run_integrate(cfg);
            worst = std::max(worst, s.max_rel_energy_err);
        }
        report("energy exactness across systems", worst <= 1e-11, worst);
    }

    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-preserving integrators for nonholonomic systems"};
    // --h is the step-size flag, so help must not claim the short -h.
    app.set_help_flag("--help", "print usage");
    app.set_help_all_flag("--help-all", "print usage for every subcommand");
    app.require_subcommand(1);

    CliOptions opt;
    FlagStage stage;

    CLI::App* integrate = app.add_subcommand("integrate", "fixed-step run, one CSV row per step");
    CLI::App* order = app.add_subcommand("order-study", "global error vs step size");
    CLI::App* variance =
        app.add_subcommand("variance-study", "ensemble energy-error variance scaled by h^4");
    CLI::App* sleigh =
        app.add_subcommand("sleigh-stability", "Chaplygin sleigh equilibrium stability report");
    CLI::App* list = app.add_subcommand("list-systems", "print the system catalog");
    CLI::App* verify = app.add_subcommand("verify", "run the fast invariant suites");

    for (CLI::App* cmd : {integrate, order, variance, sleigh, list, verify})
        cmd->set_help_flag("--help", "print usage");
    for (CLI::App* cmd : {integrate, order, variance, sleigh}) stage.attach(cmd);
    order->add_option("--h-list", opt.h_list, "step sizes for the study");
    order->add_option("--reference-factor", opt.reference_factor,
                      "reference run uses min(h)/factor");
    variance->add_option("--h-list", opt.h_list, "step sizes for the study");
    variance->add_option("--ensemble", opt.ensemble, "number of sampled initial states");
    variance->add_option("--record-dt", opt.record_dt, "recording interval (0: t_end/20)");
    sleigh->add_option("--J", opt.J, "moment of inertia");
    sleigh->add_option("--a", opt.a, "blade offset");
    sleigh->add_option("--m", opt.m, "mass");
    sleigh->add_option("--rho2", opt.rho2, "initial rho2");
    sleigh->add_option("--rho1", opt.rho1_list, "initial rho1 values");
    sleigh->add_option("--steps", opt.steps, "number of steps");
    sleigh->add_option("--q0", opt.q0, "initial (x1, x2, theta)")->expected(3);
    std::uint64_t verify_seed = 1;
    verify->add_option("--seed", verify_seed, "PRNG seed for the property suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) return cmd_list_systems();
        if (verify->parsed()) return cmd_verify(verify_seed);
        CLI::App* active = app.get_subcommands().front();
        stage.apply(active, opt);
        if (integrate->parsed()) return cmd_integrate(opt);
        if (order->parsed()) return cmd_order_study(opt);
        if (variance->parsed()) return cmd_variance_study(opt);
        if (sleigh->parsed()) return cmd_sleigh_stability(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
