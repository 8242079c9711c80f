#pragma once

#include <vector>

#include "tumor_dde/errors.hpp"

namespace tumor_dde {

struct State {
    double T = 0.0;  // tumor cell concentration
    double E = 0.0;  // effector cell concentration
};

// Continuous q-periodic chemotherapy level b(t) = b0 + phi(t).
//
// Two families are supported: the built-in cosine phi(t) = eps*cos(2*pi*t/q),
// and an arbitrary tabulated periodic function sampled on a uniform grid over
// one period (linear interpolation between samples).
class ChemoForcing {
  public:
    // Constant forcing b(t) = b0.
    static ChemoForcing constant(double b0);
    // b(t) = b0 + eps*cos(2*pi*t/q), q > 0 unless eps == 0.
    static ChemoForcing cosine(double b0, double eps, double q);
    // b(t) = b0 + table[i] sampled uniformly over [0, q), wrapped periodically.
    static ChemoForcing tabulated(double b0, std::vector<double> table, double q);

    double operator()(double t) const;
    bool is_constant() const { return eps_ == 0.0 && table_.empty(); }
    double b0() const { return b0_; }
    double eps() const { return eps_; }
    double period() const { return q_; }
    // min over one period of b(t); equals b0 for constant forcing.
    double min_level() const;
    double sup_abs_phi() const;

  private:
    double b0_ = 0.0;
    double eps_ = 0.0;
    double q_ = 0.0;
    std::vector<double> table_;
};

// Raw biological rates. Validated once at construction, never per call.
struct ModelParams {
    double r;      // tumor growth rate, > 0 (already divided by beta)
    double beta;   // Richards shape exponent, in (0,1]
    double b_hat;  // baseline chemotherapy level, >= 0, < 1/beta
    double gamma;  // kill rate, > 0
    double sigma;  // effector influx, > 0
    double eta;    // effector decay, > 0
    double p;      // max recruitment, > 0
    double m;      // max decline, > 0
    double g;      // Holling half-saturation, > 0
    double a;      // Holling handling parameter, >= 0
    double tau1;   // immune response delay, >= 0
    double tau2;   // tumor response delay, >= 0

    // Throws domain_violation when any bound above is violated.
    static ModelParams make(double r, double beta, double b_hat, double gamma,
                            double sigma, double eta, double p, double m,
                            double g, double a, double tau1, double tau2);

    double effective_b() const;  // b = 1 - beta*b_hat, > 0
};

// Rescaled parameter set: sigma -> sigma*gamma/(eta*r), m -> m/(eta*g),
// p -> p/(eta*g), a -> a/g, and mu := m - p after scaling.
struct ScaledParams {
    double sigma_s;
    double m_s;
    double p_s;
    double a_s;
    double mu;  // m_s - p_s, either sign
    // carried over unchanged
    double r;
    double beta;
    double b;
    double gamma;
    double eta;

    static ScaledParams from(const ModelParams& params);
    // Inverse map; g (and the delays) are not part of the scaled set.
    ModelParams unscale(double g, double tau1 = 0.0, double tau2 = 0.0) const;
};

double effective_b(double beta, double b_hat);

// f(T) = r*(b - T^beta), with 0^beta := 0 so f(0) = r*b.
double growth_f(double T, double r, double beta, double b);
// f'(T) = -r*beta*T^(beta-1); unbounded at T=0 for beta<1 (domain_violation).
double growth_f_prime(double T, double r, double beta);
// T*f'(T) = -r*beta*T^beta, continuous down to T=0.
double growth_tf_prime(double T, double r, double beta);

// Holling response h(s) = s/(g + a*s) and h'(s) = g/(g + a*s)^2.
double holling_h(double s, double g, double a);
double holling_h_prime(double s, double g, double a);

// Right-hand side of the delayed system.  X_tau1 and X_tau2 are the states
// read at t - tau1 and t - tau2; forcing supplies b(t).
State rhs(double t, const State& X, const State& X_tau1, const State& X_tau2,
          const ModelParams& params, const ChemoForcing& forcing);

// Autonomous right-hand side with b(t) == b_hat.
State rhs_autonomous(const State& X, const State& X_tau1, const State& X_tau2,
                     const ModelParams& params);

}  // namespace tumor_dde
