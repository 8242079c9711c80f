#include "tumor_dde/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tumor_dde/errors.hpp"

namespace tumor_dde {

namespace {

constexpr double kClipFloor = -1e-12;  // roundoff band clipped to zero

std::string format_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", t);
    return buf;
}

}  // namespace

HistorySegment HistorySegment::constant(State value, double t_min) {
    if (!(value.T >= 0.0 && value.E >= 0.0))
        throw domain_violation("history: components must be nonnegative");
    if (!(t_min <= 0.0)) throw domain_violation("history: t_min must be <= 0");
    HistorySegment hs;
    hs.constant_ = value;
    hs.t_min_ = t_min;
    return hs;
}

HistorySegment HistorySegment::tabulated(std::vector<double> times, std::vector<State> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw domain_violation("history: need matching times/values with >= 2 samples");
    if (times.back() != 0.0) throw domain_violation("history: samples must end at t = 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw domain_violation("history: times must increase");
    for (const State& v : values)
        if (!(v.T >= 0.0 && v.E >= 0.0))
            throw domain_violation("history: components must be nonnegative");
    HistorySegment hs;
    hs.t_min_ = times.front();
    hs.times_ = std::move(times);
    hs.values_ = std::move(values);
    return hs;
}

State HistorySegment::eval(double s) const {
    if (times_.empty()) return constant_;
    s = std::clamp(s, times_.front(), times_.back());
    const auto it = std::upper_bound(times_.begin(), times_.end(), s);
    const std::size_t j = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(it - times_.begin(), 1), times_.size() - 1);
    const double t0 = times_[j - 1];
    const double t1 = times_[j];
    const double w = (s - t0) / (t1 - t0);
    const State& a = values_[j - 1];
    const State& b = values_[j];
    return {(1.0 - w) * a.T + w * b.T, (1.0 - w) * a.E + w * b.E};
}

double HistorySegment::max_T() const {
    if (times_.empty()) return constant_.T;
    double m = 0.0;
    for (const State& v : values_) m = std::max(m, v.T);
    return m;
}

State Trajectory::eval(double time) const {
    if (time <= 0.0) return history.eval(time);
    if (time >= t.back()) return x.back();
    const auto it = std::upper_bound(t.begin(), t.end(), time);
    const std::size_t j = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(it - t.begin(), 1), t.size() - 1);
    const double t0 = t[j - 1];
    const double dt = t[j] - t0;
    const double u = (time - t0) / dt;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double c0 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double c1 = u3 - 2.0 * u2 + u;
    const double c2 = -2.0 * u3 + 3.0 * u2;
    const double c3 = u3 - u2;
    const State& x0 = x[j - 1];
    const State& x1 = x[j];
    const State& d0 = xdot[j - 1];
    const State& d1 = xdot[j];
    return {c0 * x0.T + c1 * dt * d0.T + c2 * x1.T + c3 * dt * d1.T,
            c0 * x0.E + c1 * dt * d0.E + c2 * x1.E + c3 * dt * d1.E};
}

double default_step(const ModelParams& params, const ChemoForcing& forcing, double t_end) {
    double scale = std::numeric_limits<double>::infinity();
    if (params.tau1 > 0.0) scale = std::min(scale, params.tau1);
    if (params.tau2 > 0.0) scale = std::min(scale, params.tau2);
    if (!forcing.is_constant()) scale = std::min(scale, forcing.period());
    if (std::isfinite(scale)) return scale / 128.0;
    return t_end / 1e5;
}

Trajectory integrate(const ModelParams& params, const ChemoForcing& forcing,
                     const HistorySegment& history, double t_end, double h) {
    if (!(t_end > 0.0)) throw domain_violation("integrate: t_end must be > 0");
    if (!(h > 0.0)) throw domain_violation("integrate: h must be > 0");
    double tau_pos = std::numeric_limits<double>::infinity();
    if (params.tau1 > 0.0) tau_pos = std::min(tau_pos, params.tau1);
    if (params.tau2 > 0.0) tau_pos = std::min(tau_pos, params.tau2);
    if (std::isfinite(tau_pos) && h > tau_pos / 4.0)
        throw domain_violation("integrate: method of steps needs h <= min(positive delay)/4");
    if (!forcing.is_constant() && h > forcing.period() / 100.0)
        throw domain_violation("integrate: periodic forcing needs h <= q/100");
    const double tau_max = std::max(params.tau1, params.tau2);
    if (history.t_min() > -tau_max + 1e-15 && tau_max > 0.0 && history.t_min() > -tau_max)
        throw domain_violation("integrate: history does not cover [-max delay, 0]");

    Trajectory traj;
    traj.history = history;
    traj.h = h;
    traj.tau1 = params.tau1;
    traj.tau2 = params.tau2;

    const std::size_t n_full = static_cast<std::size_t>(t_end / h + 1e-9);
    const double rem = t_end - static_cast<double>(n_full) * h;

    traj.t.reserve(n_full + 2);
    traj.x.reserve(n_full + 2);
    traj.xdot.reserve(n_full + 2);
    traj.t.push_back(0.0);
    traj.x.push_back(history.eval(0.0));

    // stage states and interpolated reads may undershoot zero by roundoff;
    // the vector field is only defined on the closed quadrant
    auto clamped = [](State v) -> State { return {std::max(v.T, 0.0), std::max(v.E, 0.0)}; };
    auto delayed = [&](double time, double tau, const State& current) -> State {
        if (tau == 0.0) return current;
        return clamped(traj.eval(time - tau));
    };
    auto f = [&](double time, const State& y) -> State {
        const State yc = clamped(y);
        return rhs(time, yc, delayed(time, params.tau1, yc), delayed(time, params.tau2, yc),
                   params, forcing);
    };

    auto step_once = [&](double t0, double dt) {
        const State y = traj.x.back();
        const State k1 = f(t0, y);
        const State y2{y.T + 0.5 * dt * k1.T, y.E + 0.5 * dt * k1.E};
        const State k2 = f(t0 + 0.5 * dt, y2);
        const State y3{y.T + 0.5 * dt * k2.T, y.E + 0.5 * dt * k2.E};
        const State k3 = f(t0 + 0.5 * dt, y3);
        const State y4{y.T + dt * k3.T, y.E + dt * k3.E};
        const State k4 = f(t0 + dt, y4);
        State yn{y.T + dt * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T) / 6.0,
                 y.E + dt * (k1.E + 2.0 * k2.E + 2.0 * k3.E + k4.E) / 6.0};

        if (!std::isfinite(yn.T) || !std::isfinite(yn.E))
            throw convergence_error("integrate: non-finite state at t = " + format_time(t0 + dt));
        for (double* v : {&yn.T, &yn.E}) {
            if (*v < 0.0) {
                if (*v >= kClipFloor) {
                    *v = 0.0;
                    ++traj.clipped;
                } else if (traj.diagnostics.size() < 16) {
                    traj.diagnostics.push_back("positivity violation at t = " +
                                               format_time(t0 + dt));
                }
            }
        }
        traj.xdot.push_back(k1);  // slope at the left knot
        traj.t.push_back(t0 + dt);
        traj.x.push_back(yn);
    };

    for (std::size_t i = 0; i < n_full; ++i) step_once(static_cast<double>(i) * h, h);
    if (rem > 1e-12 * t_end) step_once(static_cast<double>(n_full) * h, rem);
    traj.xdot.push_back(f(traj.t.back(), traj.x.back()));
    return traj;
}

double EnvelopeReport::envelope_E(double t) const {
    if (std::abs(kappa) < 1e-14) return E0 + sigma * t;
    const double ek = std::exp(kappa * t);
    return ek * E0 + sigma * (ek - 1.0) / kappa;
}

EnvelopeReport envelope_check(const Trajectory& traj, const ModelParams& params,
                              const ChemoForcing& forcing) {
    EnvelopeReport rep;
    const double x = std::max(0.0, 1.0 - params.beta * forcing.min_level());
    const double t_zero = x > 0.0 ? std::pow(x, 1.0 / params.beta) : 0.0;
    rep.T_M = std::max(traj.history.max_T(), t_zero);
    // the recruitment and decline terms read T at different times, so the
    // decline term can only be dropped when the two delays coincide
    if (params.tau1 == params.tau2) {
        rep.kappa = params.m >= params.p
                        ? -params.eta
                        : (params.p - params.m) * holling_h(rep.T_M, params.g, params.a) -
                              params.eta;
    } else {
        rep.kappa = params.p * holling_h(rep.T_M, params.g, params.a) - params.eta;
    }
    rep.E0 = traj.x.front().E;
    rep.sigma = params.sigma;

    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const double slack_T =
            (traj.x[i].T - rep.T_M) / std::max(1.0, rep.T_M);
        if (slack_T > 1e-9) {
            ++rep.violations;
            rep.max_T_excess = std::max(rep.max_T_excess, slack_T);
        }
        const double bound_E = rep.envelope_E(traj.t[i]);
        const double slack_E = (traj.x[i].E - bound_E) / std::max(1.0, bound_E);
        if (slack_E > 1e-9) {
            ++rep.violations;
            rep.max_E_excess = std::max(rep.max_E_excess, slack_E);
        }
    }
    return rep;
}

const char* to_string(AsymptoticsKind kind) {
    switch (kind) {
        case AsymptoticsKind::Converged: return "converged";
        case AsymptoticsKind::LimitCycle: return "limit_cycle";
        case AsymptoticsKind::Diverged: return "diverged";
        case AsymptoticsKind::Undecided: return "undecided";
    }
    return "?";
}

namespace {

struct Peak {
    double t;
    double value;
};

// sub-grid peak location by a parabola through the three bracketing samples
Peak refine_peak(const Trajectory& traj, std::size_t i) {
    const double t0 = traj.t[i - 1], t1 = traj.t[i], t2 = traj.t[i + 1];
    const double y0 = traj.x[i - 1].T, y1 = traj.x[i].T, y2 = traj.x[i + 1].T;
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom >= 0.0 || std::abs(denom) < 1e-300) return {t1, y1};
    const double delta = 0.5 * (y0 - y2) / denom;
    const double dt = 0.5 * (t2 - t0);
    const double tp = t1 + delta * dt;
    const double vp = y1 - 0.25 * (y0 - y2) * delta;
    return {tp, vp};
}

}  // namespace

AsymptoticsReport asymptotics(const Trajectory& traj, const Equilibrium& eq) {
    AsymptoticsReport rep{AsymptoticsKind::Undecided};
    const std::size_t n = traj.t.size();
    if (n < 8) return rep;

    const double eq_scale = std::max({1.0, std::abs(eq.T), std::abs(eq.E)});
    const State last = traj.x.back();
    if (std::max(std::abs(last.T), std::abs(last.E)) > 1e6 * eq_scale) {
        rep.kind = AsymptoticsKind::Diverged;
        return rep;
    }

    const std::size_t win = std::max<std::size_t>(n / 4, 2);
    double term = 0.0;
    for (std::size_t i = n - win; i < n; ++i)
        term = std::max(term, std::max(std::abs(traj.x[i].T - eq.T),
                                       std::abs(traj.x[i].E - eq.E)));
    rep.terminal_distance = term;
    if (term < 1e-6) {
        rep.kind = AsymptoticsKind::Converged;
        return rep;
    }

    // peak scan over the trailing 60% of the trajectory
    std::vector<Peak> peaks;
    for (std::size_t i = std::max<std::size_t>(n * 2 / 5, 1); i + 1 < n; ++i) {
        if (traj.x[i].T > traj.x[i - 1].T && traj.x[i].T > traj.x[i + 1].T)
            peaks.push_back(refine_peak(traj, i));
    }
    const std::size_t want = 12;
    if (peaks.size() >= 10) {
        if (peaks.size() > want) peaks.erase(peaks.begin(), peaks.end() - want);
        const std::size_t np = peaks.size();
        double mean_gap = 0.0;
        for (std::size_t i = 1; i < np; ++i) mean_gap += peaks[i].t - peaks[i - 1].t;
        mean_gap /= static_cast<double>(np - 1);

        bool spacing_ok = true;
        for (std::size_t i = 1; i < np; ++i)
            spacing_ok &= std::abs(peaks[i].t - peaks[i - 1].t - mean_gap) <= 0.01 * mean_gap;

        // per-cycle amplitude: peak minus the following trough
        std::vector<double> amps;
        for (std::size_t i = 0; i + 1 < np; ++i) {
            double trough = peaks[i].value;
            for (std::size_t j = 0; j < n; ++j) {
                if (traj.t[j] <= peaks[i].t || traj.t[j] >= peaks[i + 1].t) continue;
                trough = std::min(trough, traj.x[j].T);
            }
            amps.push_back(peaks[i].value - trough);
        }
        double mean_amp = 0.0;
        for (double a : amps) mean_amp += a;
        mean_amp /= static_cast<double>(amps.size());
        bool amp_ok = mean_amp > 1e-5;
        for (double a : amps) amp_ok &= std::abs(a - mean_amp) <= 0.01 * mean_amp;

        if (spacing_ok && amp_ok) {
            rep.kind = AsymptoticsKind::LimitCycle;
            rep.period = mean_gap;
            rep.amplitude = 0.5 * mean_amp;
            rep.peaks_used = static_cast<int>(np);
            return rep;
        }
    }
    return rep;
}

}  // namespace tumor_dde
