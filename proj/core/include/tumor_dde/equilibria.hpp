#pragma once

#include <string>
#include <vector>

#include "tumor_dde/model.hpp"

namespace tumor_dde {

// Evaluation context for h_mu(T) = mu*(T^beta - b)*T + T^beta on [0, b^(1/beta)].
// Roots of h_mu(T) = h0 with h0 = b - sigma_s give the tumor component of the
// non-tumor-free equilibria at a = 0.
struct HContext {
    double mu;
    double b;
    double beta;
    double h0 = 0.0;

    double t_max() const;  // b^(1/beta)
};

struct HDerivs {
    double value;
    double d1;
    double d2;
    double d3;
};

double h_mu(const HContext& ctx, double T);
// First three derivatives; unbounded at T=0 for beta<1 (domain_violation).
HDerivs h_mu_derivs(const HContext& ctx, double T);

double mu_critical(double b, double beta);     // mu_c
double mu_fold(double b, double beta);         // mu_bif
double t_fold(double b, double beta);          // T_bif = ((1-beta)*b)^(1/beta)
// min of h' over T>0, l(mu) = mu*b*((mu_c/mu)^beta - 1), defined for mu>0.
double h_prime_min(double b, double beta, double mu);

struct CriticalConstants {
    double b, beta, mu;
    double mu_c;
    double mu_bif;
    double T_bif;
    bool has_inflection = false;  // mu > 0
    double T_star = 0.0;          // (1-beta)/(mu*(1+beta))
    bool has_fold_pair = false;   // mu > mu_c
    double T_L = 0.0, T_R = 0.0;  // the two zeros of h', T_L < T_star < T_R
    double H_L = 0.0, H_R = 0.0;  // h_mu at T_L, T_R

    double left_zero() const;   // T_L, throws when mu <= mu_c
    double right_zero() const;  // T_R, throws when mu <= mu_c
};

CriticalConstants critical_constants(double b, double beta, double mu);

struct TriangleRoot {
    double T;
    int slope_sign;   // sign of h' at the root: -1, 0, +1
    bool degenerate;  // merged tangency root
};

// All roots of h_mu(T) = h0 on the closed interval [0, b^(1/beta)], sorted
// ascending.  Roots closer than 1e-8 * b^(1/beta) are merged and flagged
// degenerate.  An empty result is a valid outcome.
std::vector<TriangleRoot> solve_triangle(const HContext& ctx);

// Label describing which root-count regime (concave, monotone, folded)
// and which h0 band the context falls in.
std::string classify_case(const HContext& ctx);

enum class EquilibriumKind { TumorFree, Interior };

struct Equilibrium {
    EquilibriumKind kind;
    double T = 0.0;
    double E = 0.0;
    bool simple = true;
    std::string case_label;
    double residual = 0.0;  // sup-norm of the autonomous rhs at (T,E)
};

Equilibrium tumor_free(const ModelParams& params);

// The unique interior equilibrium at a = 0 under condition (i) sigma_s < b,
// mu <= 0 or (ii) sigma_s <= b, 0 < mu <= mu_c; hypothesis_error otherwise.
Equilibrium interior_equilibrium(const ScaledParams& scaled);

// S(T, mu, a) = T*[(a+mu)*T^beta + T^(beta-1) - (b*(mu+a) - a*sigma_s)];
// equals h_mu(T) at a = 0.  Equilibria solve S = b - sigma_s.
double S_value(const ScaledParams& scaled, double T);
double S_prime(const ScaledParams& scaled, double T);

// Newton continuation of a simple a=0 root to small a_s > 0 (threshold
// default 1e-2).  Returns eq0 unchanged when scaled.a_s == 0.
Equilibrium continue_in_a(const Equilibrium& eq0, const ScaledParams& scaled,
                          double a_threshold = 1e-2);

// sup-norm residual of the autonomous equilibrium system at (T,E).
double equilibrium_residual(const ModelParams& params, double T, double E);

// Tumor-free point plus every admissible root of the scalar equation,
// continued to small a when params.a > 0.
std::vector<Equilibrium> all_equilibria(const ModelParams& params);

}  // namespace tumor_dde
