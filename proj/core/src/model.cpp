#include "tumor_dde/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tumor_dde {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw domain_violation(msg);
}

// T^beta with the continuous extension 0^beta = 0.
double pow_beta(double T, double beta) {
    if (T == 0.0) return 0.0;
    return std::pow(T, beta);
}

}  // namespace

ChemoForcing ChemoForcing::constant(double b0) {
    ChemoForcing f;
    f.b0_ = b0;
    return f;
}

ChemoForcing ChemoForcing::cosine(double b0, double eps, double q) {
    if (eps != 0.0 && !(q > 0.0)) throw domain_violation("chemo: q must be > 0 when eps != 0");
    ChemoForcing f;
    f.b0_ = b0;
    f.eps_ = eps;
    f.q_ = eps == 0.0 ? 0.0 : q;
    return f;
}

ChemoForcing ChemoForcing::tabulated(double b0, std::vector<double> table, double q) {
    if (!(q > 0.0)) throw domain_violation("chemo: q must be > 0 for a tabulated forcing");
    if (table.size() < 2) throw domain_violation("chemo: table needs at least 2 samples");
    ChemoForcing f;
    f.b0_ = b0;
    f.q_ = q;
    f.table_ = std::move(table);
    return f;
}

double ChemoForcing::operator()(double t) const {
    if (is_constant()) return b0_;
    if (table_.empty()) return b0_ + eps_ * std::cos(2.0 * std::numbers::pi * t / q_);
    // uniform grid over [0, q), periodic wrap, linear interpolation
    const std::size_t n = table_.size();
    double u = std::fmod(t / q_, 1.0);
    if (u < 0.0) u += 1.0;
    const double s = u * static_cast<double>(n);
    std::size_t i = static_cast<std::size_t>(s);
    if (i >= n) i = n - 1;
    const double w = s - static_cast<double>(i);
    const double y0 = table_[i];
    const double y1 = table_[(i + 1) % n];
    return b0_ + (1.0 - w) * y0 + w * y1;
}

double ChemoForcing::min_level() const {
    if (is_constant()) return b0_;
    if (table_.empty()) return b0_ - std::abs(eps_);
    double lo = table_[0];
    for (double v : table_) lo = std::min(lo, v);
    return b0_ + lo;
}

double ChemoForcing::sup_abs_phi() const {
    if (is_constant()) return 0.0;
    if (table_.empty()) return std::abs(eps_);
    double hi = 0.0;
    for (double v : table_) hi = std::max(hi, std::abs(v));
    return hi;
}

ModelParams ModelParams::make(double r, double beta, double b_hat, double gamma,
                              double sigma, double eta, double p, double m,
                              double g, double a, double tau1, double tau2) {
    require(r > 0.0, "r must be > 0");
    require(beta > 0.0 && beta <= 1.0, "beta must lie in (0,1]");
    require(b_hat >= 0.0, "b_hat must be >= 0");
    require(gamma > 0.0, "gamma must be > 0");
    require(sigma > 0.0, "sigma must be > 0");
    require(eta > 0.0, "eta must be > 0");
    require(p > 0.0, "p must be > 0");
    require(m > 0.0, "m must be > 0");
    require(g > 0.0, "g must be > 0");
    require(a >= 0.0, "a must be >= 0");
    require(tau1 >= 0.0 && tau2 >= 0.0, "delays must be >= 0");
    require(1.0 - beta * b_hat > 0.0, "b = 1 - beta*b_hat must be > 0 (b_hat < 1/beta)");
    return ModelParams{r, beta, b_hat, gamma, sigma, eta, p, m, g, a, tau1, tau2};
}

double ModelParams::effective_b() const { return tumor_dde::effective_b(beta, b_hat); }

double effective_b(double beta, double b_hat) {
    if (!(beta > 0.0 && beta <= 1.0)) throw domain_violation("beta must lie in (0,1]");
    if (!(b_hat >= 0.0)) throw domain_violation("b_hat must be >= 0");
    const double b = 1.0 - beta * b_hat;
    if (!(b > 0.0)) throw domain_violation("b_hat >= 1/beta leaves no positive growth range");
    return b;
}

ScaledParams ScaledParams::from(const ModelParams& params) {
    ScaledParams s;
    s.sigma_s = params.sigma * params.gamma / (params.eta * params.r);
    s.m_s = params.m / (params.eta * params.g);
    s.p_s = params.p / (params.eta * params.g);
    s.a_s = params.a / params.g;
    s.mu = s.m_s - s.p_s;
    s.r = params.r;
    s.beta = params.beta;
    s.b = params.effective_b();
    s.gamma = params.gamma;
    s.eta = params.eta;
    return s;
}

ModelParams ScaledParams::unscale(double g, double tau1, double tau2) const {
    const double b_hat = (1.0 - b) / beta;
    // grouped to invert ScaledParams::from factor by factor
    return ModelParams::make(r, beta, b_hat, gamma, sigma_s * (eta * r) / gamma, eta,
                             p_s * (eta * g), m_s * (eta * g), g, a_s * g, tau1, tau2);
}

double growth_f(double T, double r, double beta, double b) {
    if (!(T >= 0.0)) throw domain_violation("growth_f: T must be >= 0");
    return r * (b - pow_beta(T, beta));
}

double growth_f_prime(double T, double r, double beta) {
    if (!(T >= 0.0)) throw domain_violation("growth_f_prime: T must be >= 0");
    if (T == 0.0) {
        if (beta < 1.0) throw domain_violation("growth_f_prime: unbounded at T=0 for beta<1");
        return -r;
    }
    return -r * beta * std::pow(T, beta - 1.0);
}

double growth_tf_prime(double T, double r, double beta) {
    return -r * beta * pow_beta(T, beta);
}

double holling_h(double s, double g, double a) {
    if (!(s >= 0.0)) throw domain_violation("holling_h: s must be >= 0");
    return s / (g + a * s);
}

double holling_h_prime(double s, double g, double a) {
    if (!(s >= 0.0)) throw domain_violation("holling_h_prime: s must be >= 0");
    const double d = g + a * s;
    return g / (d * d);
}

State rhs(double t, const State& X, const State& X_tau1, const State& X_tau2,
          const ModelParams& params, const ChemoForcing& forcing) {
    // f(t,T) = r*(1 - beta*b(t) - T^beta); reduces to r*(b - T^beta) when
    // b(t) == b_hat.
    const double bt = 1.0 - params.beta * forcing(t);
    const double f = params.r * (bt - pow_beta(X.T, params.beta));
    const double dT = X.T * (f - params.gamma * X.E);
    const double dE =
        params.sigma + X.E * (params.p * holling_h(X_tau1.T, params.g, params.a) -
                              params.m * holling_h(X_tau2.T, params.g, params.a) - params.eta);
    return {dT, dE};
}

State rhs_autonomous(const State& X, const State& X_tau1, const State& X_tau2,
                     const ModelParams& params) {
    return rhs(0.0, X, X_tau1, X_tau2, params, ChemoForcing::constant(params.b_hat));
}

}  // namespace tumor_dde
