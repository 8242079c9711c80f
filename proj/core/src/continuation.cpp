#include "tumor_dde/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tumor_dde/errors.hpp"

namespace tumor_dde {

mat2 continuation_matrix(const ModelParams& params, const Equilibrium& eq) {
    return linearize(params, eq).total();
}

NonresonanceReport nonresonance(const mat2& M, double omega) {
    if (!(omega > 0.0)) throw domain_violation("nonresonance: omega must be > 0");
    NonresonanceReport rep;
    rep.eigenvalues = M.eigenvalues();
    rep.nonresonant = true;
    const double tol = 1e-10;
    for (const cplx& e : {rep.eigenvalues.first, rep.eigenvalues.second}) {
        if (std::abs(e) <= tol) {
            rep.nonresonant = false;
            rep.resonant_k = 0;
            return rep;
        }
        if (std::abs(e.real()) <= tol) {
            const double k_real = std::abs(e.imag()) * omega / (2.0 * std::numbers::pi);
            const long k = std::lround(k_real);
            if (k >= 1 &&
                std::abs(std::abs(e.imag()) - 2.0 * std::numbers::pi * k / omega) <= tol) {
                rep.nonresonant = false;
                rep.resonant_k = static_cast<int>(k);
                return rep;
            }
        }
    }
    return rep;
}

std::pair<double, double> continuation_thresholds(const ContinuationSetup& setup) {
    double eps_star = setup.eps_star;
    if (eps_star <= 0.0) eps_star = 0.05 * setup.params.effective_b();
    double tau_star = setup.tau_star;
    if (tau_star <= 0.0) {
        tau_star = 0.1 / setup.params.eta;
        if (setup.eq.T > 0.0) {
            try {
                const TauCritical tc =
                    tau_critical(characteristic_context(setup.params, setup.eq));
                if (!tc.stable_for_all_tau) tau_star = 0.1 * tc.tau_c;
            } catch (const hypothesis_error&) {
                // fall back to 0.1/eta when no crossing delay is defined
            }
        }
    }
    return {eps_star, tau_star};
}

namespace {

// Sample the periodic extension of an orbit candidate on [-span, 0].
HistorySegment history_from_candidate(const std::vector<double>& grid,
                                      const std::vector<State>& values, double omega,
                                      double span) {
    if (span <= 0.0) return HistorySegment::constant(values.front(), 0.0);
    auto eval_candidate = [&](double time) -> State {
        double u = std::fmod(time, omega);
        if (u < 0.0) u += omega;
        const auto it = std::upper_bound(grid.begin(), grid.end(), u);
        const std::size_t j = std::min<std::size_t>(
            std::max<std::ptrdiff_t>(it - grid.begin(), 1), grid.size() - 1);
        const double w = (u - grid[j - 1]) / (grid[j] - grid[j - 1]);
        return {(1.0 - w) * values[j - 1].T + w * values[j].T,
                (1.0 - w) * values[j - 1].E + w * values[j].E};
    };
    const std::size_t n = std::max<std::size_t>(
        static_cast<std::size_t>(std::ceil(span / omega * static_cast<double>(grid.size()))) + 2,
        8);
    std::vector<double> times(n);
    std::vector<State> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        times[i] = -span + span * static_cast<double>(i) / static_cast<double>(n - 1);
        State v = eval_candidate(times[i]);
        v.T = std::max(v.T, 0.0);
        v.E = std::max(v.E, 0.0);
        vals[i] = v;
    }
    times.back() = 0.0;
    return HistorySegment::tabulated(std::move(times), std::move(vals));
}

double pick_step(const ContinuationSetup& setup) {
    double h = setup.h > 0.0 ? setup.h : setup.omega / 2048.0;
    for (double tau : {setup.params.tau1, setup.params.tau2})
        if (tau > 0.0) h = std::min(h, tau / 4.0);
    if (!setup.forcing.is_constant()) h = std::min(h, setup.forcing.period() / 100.0);
    return h;
}

}  // namespace

PeriodicOrbit find_periodic(const ContinuationSetup& setup) {
    const ModelParams& params = setup.params;
    const double omega = setup.omega;
    if (!(omega > 0.0)) throw domain_violation("find_periodic: omega must be > 0");
    if (!setup.forcing.is_constant() &&
        std::abs(setup.forcing.period() - omega) > 1e-12 * omega)
        throw hypothesis_error("find_periodic: forcing period must equal omega");

    const mat2 M = continuation_matrix(params, setup.eq);
    const NonresonanceReport res = nonresonance(M, omega);
    if (!res.nonresonant)
        throw hypothesis_error("find_periodic: resonance at k = " + std::to_string(res.resonant_k));

    const auto [eps_star, tau_star] = continuation_thresholds(setup);
    const double eps = setup.forcing.sup_abs_phi();
    if (eps > eps_star)
        throw hypothesis_error("find_periodic: forcing amplitude above the smallness threshold");
    if (params.tau1 > tau_star || params.tau2 > tau_star)
        throw hypothesis_error("find_periodic: delays above the smallness threshold");

    const std::size_t n = std::max<std::size_t>(setup.grid_n, 8);
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        grid[i] = omega * static_cast<double>(i) / static_cast<double>(n);

    PeriodicOrbit orbit;
    orbit.omega = omega;
    orbit.t = grid;
    orbit.x.assign(n + 1, State{setup.eq.T, setup.eq.E});

    // unperturbed case: the equilibrium is the zero-amplitude orbit
    if (eps == 0.0 && params.tau1 == 0.0 && params.tau2 == 0.0) return orbit;

    const double h = pick_step(setup);
    const double span = std::max(params.tau1, params.tau2);

    State x0{setup.eq.T, setup.eq.E};
    std::vector<State> candidate = orbit.x;
    bool settled = false;
    for (int outer = 0; outer < setup.picard_max && !settled; ++outer) {
        const HistorySegment hist = history_from_candidate(grid, candidate, omega, span);

        // integrate() starts from history(0), so shooting from `from` pins the
        // candidate history's endpoint to the shooting state
        auto period_map = [&](State from) -> Trajectory {
            if (span <= 0.0) {
                HistorySegment seeded = HistorySegment::constant(
                    {std::max(from.T, 0.0), std::max(from.E, 0.0)}, 0.0);
                return integrate(params, setup.forcing, seeded, omega, h);
            }
            const std::size_t hn = 64;
            std::vector<double> ht(hn + 1);
            std::vector<State> hx(hn + 1);
            for (std::size_t i = 0; i <= hn; ++i) {
                ht[i] = -span + span * static_cast<double>(i) / static_cast<double>(hn);
                State v = hist.eval(ht[i]);
                hx[i] = {std::max(v.T, 0.0), std::max(v.E, 0.0)};
            }
            ht[hn] = 0.0;
            hx[hn] = {std::max(from.T, 0.0), std::max(from.E, 0.0)};
            return integrate(params, setup.forcing, HistorySegment::tabulated(ht, hx), omega, h);
        };

        auto shoot = [&](State from) -> State {
            const Trajectory traj = period_map(from);
            const State end = traj.terminal();
            return {end.T - from.T, end.E - from.E};
        };

        // Newton with a forward-difference Jacobian
        bool newton_ok = false;
        for (int it = 0; it < setup.newton_max; ++it) {
            const State g0 = shoot(x0);
            const double gn = std::max(std::abs(g0.T), std::abs(g0.E));
            if (gn <= setup.newton_tol * (1.0 + std::max(std::abs(x0.T), std::abs(x0.E)))) {
                newton_ok = true;
                break;
            }
            const double dT = 1e-7 * (1.0 + std::abs(x0.T));
            const double dE = 1e-7 * (1.0 + std::abs(x0.E));
            const State gT = shoot({x0.T + dT, x0.E});
            const State gE = shoot({x0.T, x0.E + dE});
            const mat2 jac{(gT.T - g0.T) / dT, (gE.T - g0.T) / dE,
                           (gT.E - g0.E) / dT, (gE.E - g0.E) / dE};
            const vec2 step = solve2(jac, {-g0.T, -g0.E});
            x0 = {x0.T + step.x, x0.E + step.y};
            if (!std::isfinite(x0.T) || !std::isfinite(x0.E))
                throw convergence_error("find_periodic: Newton iterate became non-finite");
        }
        if (!newton_ok)
            throw convergence_error("find_periodic: shooting Newton exceeded 30 iterations");

        const Trajectory traj = period_map(x0);
        if (!traj.diagnostics.empty())
            throw convergence_error("find_periodic: candidate lost positivity");
        double diff = 0.0;
        std::vector<State> next(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            next[i] = traj.eval(grid[i]);
            diff = std::max({diff, std::abs(next[i].T - candidate[i].T),
                             std::abs(next[i].E - candidate[i].E)});
        }
        candidate = std::move(next);
        settled = diff < 1e-10;
        if (span <= 0.0) settled = true;  // no history feedback without delays
    }
    if (!settled)
        throw convergence_error("find_periodic: history self-consistency iteration stalled");

    orbit.x = candidate;
    double amp = 0.0;
    double sup = 0.0;
    for (const State& v : orbit.x) {
        amp = std::max({amp, std::abs(v.T - setup.eq.T), std::abs(v.E - setup.eq.E)});
        sup = std::max({sup, std::abs(v.T), std::abs(v.E)});
        if (v.T < 0.0 || v.E < 0.0)
            throw convergence_error("find_periodic: orbit left the nonnegative quadrant");
    }
    orbit.amplitude = amp;
    orbit.residual = orbit_residual(orbit, setup);
    if (orbit.residual > 1e-8 * (1.0 + sup))
        throw convergence_error("find_periodic: closure residual above tolerance");
    return orbit;
}

double orbit_residual(const PeriodicOrbit& orbit, const ContinuationSetup& setup) {
    const double span = std::max(setup.params.tau1, setup.params.tau2);
    HistorySegment hist =
        span > 0.0 ? history_from_candidate(orbit.t, orbit.x, orbit.omega, span)
                   : HistorySegment::constant(
                         {std::max(orbit.x.front().T, 0.0), std::max(orbit.x.front().E, 0.0)},
                         0.0);
    const double h = pick_step(setup);
    const Trajectory traj = integrate(setup.params, setup.forcing, hist, orbit.omega, h);
    double defect = 0.0;
    for (std::size_t i = 0; i < orbit.t.size(); ++i) {
        const State v = traj.eval(orbit.t[i]);
        defect = std::max({defect, std::abs(v.T - orbit.x[i].T), std::abs(v.E - orbit.x[i].E)});
    }
    return defect;
}

}  // namespace tumor_dde
