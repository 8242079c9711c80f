#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "tumor_dde/equilibria.hpp"
#include "tumor_dde/integrator.hpp"
#include "tumor_dde/linear_stability.hpp"
#include "tumor_dde/mat2.hpp"
#include "tumor_dde/model.hpp"

namespace tumor_dde {

// Undelayed linearization at an equilibrium, the matrix whose spectrum
// decides the nonresonance criterion;
// equals A0 + A1 + A2 of the delayed linearization.
mat2 continuation_matrix(const ModelParams& params, const Equilibrium& eq);

struct NonresonanceReport {
    bool nonresonant;
    std::pair<cplx, cplx> eigenvalues;
    int resonant_k = -1;  // smallest k >= 0 with eigenvalue ~ 2k pi i/omega
};

// True iff no eigenvalue of M equals +-2k pi i/omega for any k in N0
// (k = 0: zero is not an eigenvalue), within tolerance 1e-10.
NonresonanceReport nonresonance(const mat2& M, double omega);

struct ContinuationSetup {
    ModelParams params;    // delays tau1, tau2 live here
    ChemoForcing forcing;  // omega-periodic; constant means eps = 0
    Equilibrium eq;
    double omega;

    // smallness thresholds; <= 0 selects the defaults 0.05*b and
    // 0.1*tau_c (or 0.1/eta when tau_c is undefined)
    double eps_star = 0.0;
    double tau_star = 0.0;

    std::size_t grid_n = 512;  // orbit samples per period
    double h = 0.0;            // integrator step; <= 0 picks a default
    int newton_max = 30;
    double newton_tol = 1e-12;
    int picard_max = 25;
};

std::pair<double, double> continuation_thresholds(const ContinuationSetup& setup);

struct PeriodicOrbit {
    double omega = 0.0;
    std::vector<double> t;  // uniform grid 0..omega inclusive
    std::vector<State> x;
    double residual = 0.0;   // closure defect through the integrator
    double amplitude = 0.0;  // sup-norm distance to the seed equilibrium
};

// Shooting Newton on X0 -> flow_omega(X0) - X0, with the delayed reads frozen
// at the previous orbit candidate and re-seeded until self-consistent.
PeriodicOrbit find_periodic(const ContinuationSetup& setup);

// Re-integrates one period from the orbit's initial state with the orbit as
// history and reports the max defect against the orbit samples.
double orbit_residual(const PeriodicOrbit& orbit, const ContinuationSetup& setup);

}  // namespace tumor_dde
