#include "cli.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tumor_dde/continuation.hpp"
#include "tumor_dde/equilibria.hpp"
#include "tumor_dde/errors.hpp"
#include "tumor_dde/integrator.hpp"
#include "tumor_dde/linear_stability.hpp"
#include "tumor_dde/model.hpp"
#include "tumor_dde/params_io.hpp"
#include "tumor_dde/switching_curves.hpp"

namespace tumor_dde::cli {

namespace {

using nlohmann::json;

void emit_text(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    write_file_atomic(resolve_out_path(out_path), content);
}

void emit_json(const json& j, const std::string& out_path) {
    emit_text(j.dump(2) + "\n", out_path);
}

json forcing_json(const ChemoForcing& f) {
    return json{{"b0", f.b0()}, {"eps", f.eps()}, {"q", f.period()}};
}

json params_json(const ModelParams& p) {
    return json{{"r", p.r},         {"beta", p.beta}, {"b_hat", p.b_hat},
                {"gamma", p.gamma}, {"sigma", p.sigma}, {"eta", p.eta},
                {"p", p.p},         {"m", p.m},       {"g", p.g},
                {"a", p.a},         {"tau1", p.tau1}, {"tau2", p.tau2}};
}

// Per-subcommand option overrides applied on top of the shared config file.
struct DelayOverride {
    std::optional<double> tau1, tau2;
    void apply(ModelParams& p) const {
        ModelParams q = p;
        q.tau1 = tau1.value_or(p.tau1);
        q.tau2 = tau2.value_or(p.tau2);
        p = ModelParams::make(q.r, q.beta, q.b_hat, q.gamma, q.sigma, q.eta, q.p, q.m, q.g,
                              q.a, q.tau1, q.tau2);
    }
};

void run_equilibria(const std::string& config, const std::string& out) {
    const FileConfig cfg = load_params_file(config);
    json list = json::array();
    for (const Equilibrium& eq : all_equilibria(cfg.params)) {
        list.push_back(json{{"kind", eq.kind == EquilibriumKind::TumorFree ? "tumor-free"
                                                                           : "interior"},
                            {"T", eq.T},
                            {"E", eq.E},
                            {"simple", eq.simple},
                            {"case_label", eq.case_label}});
    }
    emit_json(list, out);
}

std::optional<Equilibrium> try_interior(const ModelParams& params, json& diagnostics) {
    ScaledParams sp = ScaledParams::from(params);
    try {
        Equilibrium eq;
        if (sp.a_s > 0.0) {
            ScaledParams sp0 = sp;
            sp0.a_s = 0.0;
            eq = continue_in_a(interior_equilibrium(sp0), sp);
        } else {
            eq = interior_equilibrium(sp);
        }
        return eq;
    } catch (const std::exception& e) {
        diagnostics.push_back(std::string("interior equilibrium unavailable: ") + e.what());
        return std::nullopt;
    }
}

void run_stability(const std::string& config, const DelayOverride& delays,
                   const std::string& out) {
    FileConfig cfg = load_params_file(config);
    delays.apply(cfg.params);
    const ModelParams& params = cfg.params;

    json diagnostics = json::array();
    json j;
    const StabilityVerdict tf = tumor_free_verdict(params);
    j["delta"] = tumor_free_delta(params);
    j["tumor_free_label"] = to_string(tf.label);
    j["label"] = to_string(tf.label);
    j["d_star"] = nullptr;
    j["lambda1"] = nullptr;
    j["lambda2"] = nullptr;
    j["tau_a"] = nullptr;
    j["y_hat"] = nullptr;
    j["tau_c"] = nullptr;

    if (auto eq = try_interior(params, diagnostics)) {
        const CharacteristicContext ctx = characteristic_context(params, *eq);
        j["lambda1"] = ctx.lambda1;
        j["lambda2"] = ctx.lambda2;
        j["d_star"] = ctx.d_star();
        try {
            const TauCritical tc = tau_critical(ctx);
            if (!tc.stable_for_all_tau) {
                j["tau_a"] = tc.tau_a;
                j["y_hat"] = tc.y_hat;
                j["tau_c"] = tc.tau_c;
            } else {
                diagnostics.push_back("equal-delay analysis: stable for every delay");
            }
        } catch (const std::exception& e) {
            diagnostics.push_back(std::string("equal-delay analysis unavailable: ") + e.what());
        }

        const StabilityVerdict ds = d_star_verdict(ctx, params.tau1, params.tau2);
        if (ds.label == StabilityLabel::Unstable) {
            j["label"] = to_string(StabilityLabel::Unstable);
            j["witness_real_root"] = ds.witness;
        } else {
            try {
                const int count =
                    rhp_root_count(ctx, params.tau1, params.tau2, default_counting_box(ctx));
                j["rhp_root_count"] = count;
                j["label"] = to_string(count == 0
                                           ? StabilityLabel::LocallyAsymptoticallyStable
                                           : StabilityLabel::Unstable);
            } catch (const std::exception& e) {
                j["label"] = to_string(StabilityLabel::Inconclusive);
                diagnostics.push_back(std::string("root count unavailable: ") + e.what());
            }
        }
    }
    j["diagnostics"] = diagnostics;
    emit_json(j, out);
}

void run_tau_critical(const std::string& config, const std::string& out) {
    const FileConfig cfg = load_params_file(config);
    json diagnostics = json::array();
    auto eq = try_interior(cfg.params, diagnostics);
    if (!eq) throw hypothesis_error("tau-critical: no interior equilibrium under (i)/(ii)");
    const CharacteristicContext ctx = characteristic_context(cfg.params, *eq);
    const TauCritical tc = tau_critical(ctx);
    json j{{"lambda1", ctx.lambda1},
           {"lambda2", ctx.lambda2},
           {"R", ctx.R},
           {"N", ctx.N()},
           {"d_star", ctx.d_star()},
           {"stable_for_all_tau", tc.stable_for_all_tau},
           {"diagnostics", diagnostics}};
    if (tc.stable_for_all_tau) {
        j["tau_a"] = nullptr;
        j["y_hat"] = nullptr;
        j["tau_c"] = nullptr;
        j["tau_k"] = json::array();
    } else {
        j["tau_a"] = tc.tau_a;
        j["y_hat"] = tc.y_hat;
        j["tau_c"] = tc.tau_c;
        j["tau_k"] = tc.tau_k;
    }
    emit_json(j, out);
}

void run_switching_curves(const std::string& config, std::size_t samples, int s_max, int k_max,
                          const std::string& out) {
    const FileConfig cfg = load_params_file(config);
    json diagnostics = json::array();
    auto eq = try_interior(cfg.params, diagnostics);
    if (!eq) throw hypothesis_error("switching-curves: no interior equilibrium under (i)/(ii)");
    const CharacteristicContext ctx = characteristic_context(cfg.params, *eq);
    const ScaledParams sp = ScaledParams::from(cfg.params);
    const bool dagger = sp.sigma_s < sp.b && sp.mu <= 0.0;

    const CurveFamily fam = trace_curves(ctx, default_y_grid(ctx), samples, s_max, k_max);

    std::vector<std::vector<double>> rows;
    for (const CurveBranch& br : fam.branches)
        for (const SwitchingCurvePoint& pt : br.points)
            rows.push_back({pt.y, static_cast<double>(pt.sign), static_cast<double>(pt.s),
                            static_cast<double>(pt.k), pt.tau1, pt.tau2, pt.residual});
    emit_text(csv_table({"y", "sign", "s", "k", "tau1", "tau2", "residual"}, rows), out);

    if (!out.empty()) {
        json meta{{"hypothesis_dagger", dagger},
                  {"dropped_branch_points", fam.dropped},
                  {"feasible_intervals", json::array()},
                  {"diagnostics", diagnostics}};
        for (const auto& [a, b] : fam.feasible)
            meta["feasible_intervals"].push_back(json::array({a, b}));
        emit_json(meta, out + ".meta.json");
    }
}

void run_simulate(const std::string& config, double t_end, double h, double T0, double E0,
                  const std::string& out) {
    const FileConfig cfg = load_params_file(config);
    const ModelParams& params = cfg.params;
    if (h <= 0.0) h = default_step(params, cfg.forcing, t_end);
    if (T0 < 0.0) T0 = 0.5 * std::pow(params.effective_b(), 1.0 / params.beta);
    if (E0 < 0.0) E0 = params.sigma / params.eta;

    const double tau_max = std::max(params.tau1, params.tau2);
    const HistorySegment history = HistorySegment::constant({T0, E0}, -std::max(tau_max, 1.0));
    const Trajectory traj = integrate(params, cfg.forcing, history, t_end, h);

    std::vector<std::vector<double>> rows;
    rows.reserve(traj.t.size());
    for (std::size_t i = 0; i < traj.t.size(); ++i)
        rows.push_back({traj.t[i], traj.x[i].T, traj.x[i].E});
    emit_text(csv_table({"t", "T", "E"}, rows), out);

    const EnvelopeReport env = envelope_check(traj, params, cfg.forcing);
    json meta{{"params", params_json(params)},
              {"forcing", forcing_json(cfg.forcing)},
              {"h", h},
              {"t_end", t_end},
              {"delays", json::array({params.tau1, params.tau2})},
              {"history", json{{"T0", T0}, {"E0", E0}}},
              {"clipped_negatives", traj.clipped},
              {"envelope", json{{"T_M", env.T_M},
                                {"kappa", env.kappa},
                                {"violations", env.violations}}},
              {"diagnostics", traj.diagnostics}};
    if (!out.empty()) {
        emit_json(meta, out + ".meta.json");
    } else if (!traj.diagnostics.empty()) {
        std::cerr << meta["diagnostics"].dump() << "\n";
    }
}

void run_continue_periodic(const std::string& config, double omega, double eps,
                           std::size_t grid_n, const std::string& at, const std::string& out,
                           const std::string& report) {
    const FileConfig cfg = load_params_file(config);
    json diagnostics = json::array();

    ContinuationSetup setup;
    setup.params = cfg.params;
    setup.omega = omega;
    setup.grid_n = grid_n;
    setup.forcing = eps == 0.0 ? ChemoForcing::constant(cfg.params.b_hat)
                               : ChemoForcing::cosine(cfg.params.b_hat, eps, omega);
    if (at == "tumor-free") {
        setup.eq = tumor_free(cfg.params);
    } else {
        auto eq = try_interior(cfg.params, diagnostics);
        if (!eq)
            throw hypothesis_error(
                "continue-periodic: no interior equilibrium (try --at tumor-free)");
        setup.eq = *eq;
    }

    const PeriodicOrbit orbit = find_periodic(setup);
    const NonresonanceReport res = nonresonance(continuation_matrix(cfg.params, setup.eq), omega);
    const auto [eps_star, tau_star] = continuation_thresholds(setup);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < orbit.t.size(); ++i)
        rows.push_back({orbit.t[i], orbit.x[i].T, orbit.x[i].E});
    emit_text(csv_table({"t", "T", "E"}, rows), out);

    json rep{{"omega", orbit.omega},
             {"eps", eps},
             {"residual", orbit.residual},
             {"amplitude", orbit.amplitude},
             {"equilibrium", json{{"T", setup.eq.T}, {"E", setup.eq.E}}},
             {"nonresonance_eigenvalues",
              json::array({json::array({res.eigenvalues.first.real(),
                                        res.eigenvalues.first.imag()}),
                           json::array({res.eigenvalues.second.real(),
                                        res.eigenvalues.second.imag()})})},
             {"thresholds", json{{"eps_star", eps_star}, {"tau_star", tau_star}}},
             {"diagnostics", diagnostics}};
    if (!report.empty()) {
        emit_json(rep, report);
    } else {
        emit_json(rep, "");
    }
}

struct Check {
    std::string name;
    double computed;
    double expected;
    double tol;  // relative to max(1, |expected|)
    bool pass;
};

Check make_check(const std::string& name, double computed, double expected, double tol) {
    const bool pass =
        std::abs(computed - expected) <= tol * std::max(1.0, std::abs(expected));
    return {name, computed, expected, tol, pass};
}

int run_validate(const std::string& out) {
    std::vector<Check> checks;

    // closed-form constants at b = 0.8, beta = 0.5
    checks.push_back(make_check("mu_c(b=0.8,beta=0.5) = 75/16",
                                mu_critical(0.8, 0.5), 75.0 / 16.0, 1e-12));
    checks.push_back(make_check("mu_bif(b=0.8,beta=0.5) = 25/4",
                                mu_fold(0.8, 0.5), 25.0 / 4.0, 1e-12));
    checks.push_back(make_check("T_bif(b=0.8,beta=0.5) = 4/25",
                                t_fold(0.8, 0.5), 4.0 / 25.0, 1e-12));

    {
        const HContext ctx{-1.5, 0.35, 0.5, 0.0};
        const double hp = h_mu_derivs(ctx, ctx.t_max()).d1;
        checks.push_back(make_check("h'(b^(1/beta)) at mu=-1.5,b=0.35,beta=0.5", hp, 1.17, 5e-3));
        checks.push_back(
            make_check("h(b^(1/beta)) = b at mu=-1.5,b=0.35", h_mu(ctx, ctx.t_max()), 0.35, 1e-14));
    }
    {
        const CriticalConstants cc = critical_constants(0.8, 0.5, mu_fold(0.8, 0.5));
        checks.push_back(make_check("H_R(mu_bif) = 0 at b=0.8,beta=0.5", cc.H_R, 0.0, 1e-10));
    }
    {
        ScaledParams sp{0.3, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.8, 1.0, 1.0};
        const Equilibrium eq = interior_equilibrium(sp);
        checks.push_back(make_check("beta=1, mu=0: T* = b - sigma", eq.T, 0.5, 1e-12));
        checks.push_back(make_check("beta=1, mu=0: E* = r*sigma/gamma", eq.E, 0.3, 1e-12));
    }
    {
        ScaledParams sp{0.16, 0.0, 1.0 / 0.64, 0.0, -1.0 / 0.64, 1.0, 1.0, 0.64, 1.0, 1.0};
        const Equilibrium eq = interior_equilibrium(sp);
        checks.push_back(
            make_check("beta=1, mu=-1/b: T* = (1-sqrt(sigma/b))b", eq.T, 0.32, 1e-12));
        checks.push_back(
            make_check("beta=1, mu=-1/b: E* = r*sqrt(sigma*b)/gamma", eq.E, 0.32, 1e-12));
    }
    {
        CharacteristicContext ctx;
        ctx.lambda1 = -1.0;
        ctx.lambda2 = -2.0;
        ctx.R = 1.5;
        ctx.p = 3.0;
        ctx.m = 1.0;
        ctx.p_s = 3.0;
        ctx.m_s = 1.0;
        ctx.mu = -2.0;
        const TauCritical tc = tau_critical(ctx);
        const double y_ref = std::sqrt((-5.0 + std::sqrt(45.0)) / 2.0);
        checks.push_back(make_check("y_hat for lambda=(-1,-2), N=-3", tc.y_hat, y_ref, 1e-12));
        const double res = std::abs(ctx.eval(cplx(0.0, tc.y_hat), tc.tau_c, tc.tau_c));
        checks.push_back(make_check("|P(i y_hat, tau_c, tau_c)|", res, 0.0, 1e-10));
    }

    std::ostringstream text;
    json jchecks = json::array();
    bool all = true;
    for (const Check& c : checks) {
        all = all && c.pass;
        text << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": computed=" << format_g17(c.computed)
             << " expected=" << format_g17(c.expected) << " tol=" << format_g17(c.tol) << "\n";
        jchecks.push_back(json{{"name", c.name},
                               {"computed", c.computed},
                               {"expected", c.expected},
                               {"tol", c.tol},
                               {"pass", c.pass}});
    }
    text << (all ? "all checks passed\n" : "some checks FAILED\n");
    if (out.empty()) {
        emit_text(text.str(), "");
    } else {
        emit_json(json{{"checks", jchecks}, {"all_passed", all}}, out);
    }
    return all ? 0 : 1;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"tumor-immune two-delay model: equilibria, stability, switching curves, "
                 "simulation and periodic continuation"};
    app.require_subcommand(1);

    std::function<int()> action;

    // equilibria
    {
        auto* sub = app.add_subcommand("equilibria", "find and classify all equilibria");
        auto config = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sub->add_option("--config", *config, "JSON parameter file")->required();
        sub->add_option("--out", *out, "output JSON path (stdout when omitted)");
        sub->callback([&action, config, out] {
            action = [config, out] {
                run_equilibria(*config, *out);
                return 0;
            };
        });
    }
    // stability
    {
        auto* sub = app.add_subcommand("stability", "stability verdicts at the configured delays");
        auto config = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto tau1 = std::make_shared<double>(-1.0);
        auto tau2 = std::make_shared<double>(-1.0);
        sub->add_option("--config", *config, "JSON parameter file")->required();
        sub->add_option("--tau1", *tau1, "override tau1 from the config");
        sub->add_option("--tau2", *tau2, "override tau2 from the config");
        sub->add_option("--out", *out, "output JSON path (stdout when omitted)");
        sub->callback([&action, config, out, tau1, tau2] {
            action = [config, out, tau1, tau2] {
                DelayOverride del;
                if (*tau1 >= 0.0) del.tau1 = *tau1;
                if (*tau2 >= 0.0) del.tau2 = *tau2;
                run_stability(*config, del, *out);
                return 0;
            };
        });
    }
    // tau-critical
    {
        auto* sub = app.add_subcommand("tau-critical", "equal-delay Hopf threshold");
        auto config = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sub->add_option("--config", *config, "JSON parameter file")->required();
        sub->add_option("--out", *out, "output JSON path (stdout when omitted)");
        sub->callback([&action, config, out] {
            action = [config, out] {
                run_tau_critical(*config, *out);
                return 0;
            };
        });
    }
    // switching-curves
    {
        auto* sub = app.add_subcommand("switching-curves",
                                       "stability switching curves in the (tau1, tau2) plane");
        auto config = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto samples = std::make_shared<std::size_t>(2000);
        auto smax = std::make_shared<int>(3);
        auto kmax = std::make_shared<int>(3);
        sub->add_option("--config", *config, "JSON parameter file")->required();
        sub->add_option("--y-samples", *samples, "samples per feasible interval");
        sub->add_option("--s-max", *smax, "largest s branch index");
        sub->add_option("--k-max", *kmax, "largest k branch index");
        sub->add_option("--out", *out, "output CSV path (stdout when omitted)");
        sub->callback([&action, config, out, samples, smax, kmax] {
            action = [config, out, samples, smax, kmax] {
                run_switching_curves(*config, *samples, *smax, *kmax, *out);
                return 0;
            };
        });
    }
    // simulate
    {
        auto* sub = app.add_subcommand("simulate", "integrate the delayed system");
        sub->set_help_flag("--help", "print help");  // frees -h for the step option
        auto config = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto t_end = std::make_shared<double>(0.0);
        auto h = std::make_shared<double>(0.0);
        auto T0 = std::make_shared<double>(-1.0);
        auto E0 = std::make_shared<double>(-1.0);
        sub->add_option("--config", *config, "JSON parameter file")->required();
        sub->add_option("--t-end", *t_end, "final time")->required();
        sub->add_option("--h", *h, "step size (defaults to min(tau,q)/128)");
        sub->add_option("--T0", *T0, "constant-history tumor level");
        sub->add_option("--E0", *E0, "constant-history effector level");
        sub->add_option("--out", *out, "output CSV path (stdout when omitted)");
        sub->callback([&action, config, out, t_end, h, T0, E0] {
            action = [config, out, t_end, h, T0, E0] {
                run_simulate(*config, *t_end, *h, *T0, *E0, *out);
                return 0;
            };
        });
    }
    // continue-periodic
    {
        auto* sub = app.add_subcommand("continue-periodic",
                                       "continue an omega-periodic orbit from an equilibrium");
        auto config = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto report = std::make_shared<std::string>();
        auto omega = std::make_shared<double>(0.0);
        auto eps = std::make_shared<double>(0.0);
        auto grid = std::make_shared<std::size_t>(512);
        auto at = std::make_shared<std::string>("interior");
        sub->add_option("--config", *config, "JSON parameter file")->required();
        sub->add_option("--omega", *omega, "target period")->required();
        sub->add_option("--eps", *eps, "cosine forcing amplitude");
        sub->add_option("--grid", *grid, "orbit samples per period");
        sub->add_option("--at", *at, "seed equilibrium: interior or tumor-free")
            ->check(CLI::IsMember({"interior", "tumor-free"}));
        sub->add_option("--out", *out, "orbit CSV path (stdout when omitted)");
        sub->add_option("--report", *report, "JSON report path (stdout when omitted)");
        sub->callback([&action, config, out, report, omega, eps, grid, at] {
            action = [config, out, report, omega, eps, grid, at] {
                run_continue_periodic(*config, *omega, *eps, *grid, *at, *out, *report);
                return 0;
            };
        });
    }
    // validate
    {
        auto* sub = app.add_subcommand("validate", "re-derive the closed-form constants");
        auto out = std::make_shared<std::string>();
        sub->add_option("--out", *out, "output JSON path (stdout when omitted)");
        sub->callback([&action, out] {
            action = [out] { return run_validate(*out); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action ? action() : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int dispatch(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("tumor-dde");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace tumor_dde::cli
