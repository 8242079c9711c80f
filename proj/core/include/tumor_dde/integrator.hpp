#pragma once

#include <string>
#include <vector>

#include "tumor_dde/equilibria.hpp"
#include "tumor_dde/model.hpp"

namespace tumor_dde {

// Nonnegative initial data on [t_min, 0]: constant, or tabulated with linear
// interpolation between samples.
class HistorySegment {
  public:
    static HistorySegment constant(State value, double t_min);
    // times ascending with times.back() == 0; values componentwise >= 0.
    static HistorySegment tabulated(std::vector<double> times, std::vector<State> values);

    State eval(double s) const;  // clamped to [t_min, 0]
    double t_min() const { return t_min_; }
    double max_T() const;

  private:
    std::vector<double> times_;
    std::vector<State> values_;
    State constant_{};
    double t_min_ = 0.0;
};

struct Trajectory {
    std::vector<double> t;      // knots, strictly increasing from 0
    std::vector<State> x;       // states at knots
    std::vector<State> xdot;    // derivatives at knots (dense-output slopes)
    HistorySegment history;
    double h = 0.0;
    double tau1 = 0.0, tau2 = 0.0;
    int clipped = 0;            // negative excursions in [-1e-12, 0) set to 0
    std::vector<std::string> diagnostics;

    // History for t <= 0, per-step cubic Hermite inside [0, t.back()].
    State eval(double time) const;
    State terminal() const { return x.back(); }
};

// min(positive delays, forcing period)/128, or t_end/1e5 with neither.
double default_step(const ModelParams& params, const ChemoForcing& forcing, double t_end);

// Method of steps with the classical 4th-order scheme on each segment;
// delayed states are read from the history or the accumulated interpolant.
// Requires h <= min(positive delay)/4 and h <= q/100 for periodic forcing.
Trajectory integrate(const ModelParams& params, const ChemoForcing& forcing,
                     const HistorySegment& history, double t_end, double h);

inline Trajectory integrate_autonomous(const ModelParams& params, const HistorySegment& history,
                                       double t_end, double h) {
    return integrate(params, ChemoForcing::constant(params.b_hat), history, t_end, h);
}

struct EnvelopeReport {
    double T_M;
    double kappa;
    int violations = 0;
    double max_T_excess = 0.0;  // worst relative slack above the T bound
    double max_E_excess = 0.0;
    double envelope_E(double t) const;  // e^(kappa t) E0 + sigma (e^(kappa t)-1)/kappa
    double E0 = 0.0;
    double sigma = 0.0;
};

// Verifies T(t) <= T_M and E(t) <= the exponential envelope at all samples.
EnvelopeReport envelope_check(const Trajectory& traj, const ModelParams& params,
                              const ChemoForcing& forcing);

enum class AsymptoticsKind { Converged, LimitCycle, Diverged, Undecided };

const char* to_string(AsymptoticsKind kind);

struct AsymptoticsReport {
    AsymptoticsKind kind;
    double terminal_distance = 0.0;
    double amplitude = 0.0;  // half peak-to-trough of the T component
    double period = 0.0;     // mean peak spacing
    int peaks_used = 0;
};

// Converged: terminal-window distance to the equilibrium < 1e-6.
// LimitCycle: >= 10 successive T maxima with amplitudes and spacings each
// agreeing to 1%.
AsymptoticsReport asymptotics(const Trajectory& traj, const Equilibrium& eq);

}  // namespace tumor_dde
