#include "tumor_dde/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "tumor_dde/errors.hpp"
#include "tumor_dde/rootfind.hpp"

namespace tumor_dde {

namespace {

double pow_beta(double T, double beta) {
    if (T == 0.0) return 0.0;
    return std::pow(T, beta);
}

constexpr double kMergeScale = 1e-8;  // roots closer than this * t_max merge

}  // namespace

double HContext::t_max() const { return std::pow(b, 1.0 / beta); }

double h_mu(const HContext& ctx, double T) {
    const double tb = pow_beta(T, ctx.beta);
    return ctx.mu * (tb - ctx.b) * T + tb;
}

HDerivs h_mu_derivs(const HContext& ctx, double T) {
    const double beta = ctx.beta;
    const double mu = ctx.mu;
    if (T == 0.0 && beta < 1.0)
        throw domain_violation("h_mu derivatives are unbounded at T=0 for beta<1");
    HDerivs d;
    d.value = h_mu(ctx, T);
    if (T == 0.0) {  // beta == 1
        d.d1 = 1.0 - mu * ctx.b;
        d.d2 = 2.0 * mu;
        d.d3 = 0.0;
        return d;
    }
    d.d1 = std::pow(T, beta - 1.0) * (beta + mu * (1.0 + beta) * T) - mu * ctx.b;
    d.d2 = beta * std::pow(T, beta - 2.0) * (beta - 1.0 + mu * (1.0 + beta) * T);
    d.d3 = beta * (beta - 1.0) * std::pow(T, beta - 3.0) * (beta - 2.0 + mu * (1.0 + beta) * T);
    return d;
}

double mu_critical(double b, double beta) {
    // pow(0,0)=1 makes the closed form continuous at beta=1 (limit 1/b)
    return std::pow((1.0 / b) * std::pow((1.0 - beta) / (1.0 + beta), beta - 1.0), 1.0 / beta);
}

double mu_fold(double b, double beta) {
    return 1.0 / (beta * std::pow(b * std::pow(1.0 - beta, 1.0 - beta), 1.0 / beta));
}

double t_fold(double b, double beta) { return std::pow((1.0 - beta) * b, 1.0 / beta); }

double h_prime_min(double b, double beta, double mu) {
    if (!(mu > 0.0)) throw domain_violation("h_prime_min is defined for mu > 0");
    return mu * b * (std::pow(mu_critical(b, beta) / mu, beta) - 1.0);
}

double CriticalConstants::left_zero() const {
    if (!has_fold_pair) throw domain_violation("T_L is not defined for mu <= mu_c");
    return T_L;
}

double CriticalConstants::right_zero() const {
    if (!has_fold_pair) throw domain_violation("T_R is not defined for mu <= mu_c");
    return T_R;
}

CriticalConstants critical_constants(double b, double beta, double mu) {
    if (!(b > 0.0 && b < 1.0)) throw domain_violation("critical_constants: b must lie in (0,1)");
    if (!(beta > 0.0 && beta < 1.0))
        throw domain_violation("critical_constants: beta must lie in (0,1)");
    CriticalConstants cc;
    cc.b = b;
    cc.beta = beta;
    cc.mu = mu;
    cc.mu_c = mu_critical(b, beta);
    cc.mu_bif = mu_fold(b, beta);
    cc.T_bif = t_fold(b, beta);
    if (mu > 0.0) {
        cc.has_inflection = true;
        cc.T_star = (1.0 - beta) / (mu * (1.0 + beta));
    }
    if (mu > cc.mu_c) {
        const HContext ctx{mu, b, beta, 0.0};
        auto dh = [&](double T) { return h_mu_derivs(ctx, T).d1; };
        auto ddh = [&](double T) { return h_mu_derivs(ctx, T).d2; };
        const double t_star = cc.T_star;
        // left zero: h' -> +inf as T -> 0+, h'(T_star) < 0
        double lo = t_star;
        while (dh(lo) < 0.0) lo *= 0.5;
        cc.T_L = newton_bisect(dh, ddh, lo, t_star);
        // right zero: h'(T_star) < 0 < h'(b^(1/beta))
        cc.T_R = newton_bisect(dh, ddh, t_star, ctx.t_max());
        cc.H_L = h_mu(ctx, cc.T_L);
        cc.H_R = h_mu(ctx, cc.T_R);
        cc.has_fold_pair = true;
    }
    return cc;
}

namespace {

// Interior critical points of h_mu on (0, t_max), ascending.  At most two.
std::vector<double> interior_critical_points(const HContext& ctx) {
    const double mu = ctx.mu;
    const double beta = ctx.beta;
    const double t_max = ctx.t_max();
    std::vector<double> crit;
    if (mu == 0.0) return crit;

    auto dh = [&](double T) { return h_mu_derivs(ctx, T).d1; };
    auto ddh = [&](double T) { return h_mu_derivs(ctx, T).d2; };

    if (mu < 0.0) {
        // h'' < 0 everywhere: h' decreases through at most one zero T_delta
        if (dh(t_max) >= 0.0) return crit;  // T_delta beyond the domain
        double lo = t_max;
        while (dh(lo) < 0.0) lo *= 0.5;
        crit.push_back(newton_bisect(dh, ddh, lo, t_max));
        return crit;
    }
    if (beta == 1.0) {
        // parabola: single minimum of h at (mu*b - 1)/(2*mu)
        const double tv = (mu * ctx.b - 1.0) / (2.0 * mu);
        if (tv > 0.0 && tv < t_max) crit.push_back(tv);
        return crit;
    }
    // mu > 0, beta < 1: h' has a global minimum at T_star; two zeros iff the
    // minimum is negative (mu > mu_c)
    const double t_star = (1.0 - beta) / (mu * (1.0 + beta));
    if (!(dh(t_star) < 0.0)) return crit;
    double lo = t_star;
    while (dh(lo) < 0.0) lo *= 0.5;
    crit.push_back(newton_bisect(dh, ddh, lo, t_star));
    crit.push_back(newton_bisect(dh, ddh, t_star, t_max));
    return crit;
}

int slope_sign_at(const HContext& ctx, double T) {
    double d1;
    if (T == 0.0 && ctx.beta < 1.0) {
        d1 = 1.0;  // h' -> +inf
    } else {
        d1 = h_mu_derivs(ctx, T).d1;
    }
    if (std::abs(d1) <= 1e-7 * (1.0 + std::abs(ctx.mu) * ctx.b)) return 0;
    return d1 > 0.0 ? 1 : -1;
}

}  // namespace

std::vector<TriangleRoot> solve_triangle(const HContext& ctx) {
    const double t_max = ctx.t_max();
    const double h0 = ctx.h0;

    std::vector<double> knots{0.0};
    for (double c : interior_critical_points(ctx)) knots.push_back(c);
    knots.push_back(t_max);

    auto g = [&](double T) { return h_mu(ctx, T) - h0; };
    auto dg = [&](double T) { return h_mu_derivs(ctx, T).d1; };

    std::vector<double> raw;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i];
        const double hi = knots[i + 1];
        const double glo = g(lo);
        const double ghi = g(hi);
        if (glo == 0.0) raw.push_back(lo);
        if (ghi == 0.0) raw.push_back(hi);
        if (glo * ghi < 0.0) raw.push_back(newton_bisect(g, dg, lo, hi));
    }
    std::sort(raw.begin(), raw.end());

    // merge near-coincident roots (tangency cases) and attach slope signs
    std::vector<TriangleRoot> roots;
    const double merge_tol = kMergeScale * t_max;
    for (double x : raw) {
        if (!roots.empty() && x - roots.back().T <= merge_tol) {
            roots.back().T = 0.5 * (roots.back().T + x);
            roots.back().degenerate = true;
            roots.back().slope_sign = slope_sign_at(ctx, roots.back().T);
            continue;
        }
        TriangleRoot r;
        r.T = x;
        r.slope_sign = slope_sign_at(ctx, x);
        r.degenerate = (r.slope_sign == 0);
        roots.push_back(r);
    }
    return roots;
}

std::string classify_case(const HContext& ctx) {
    const double b = ctx.b;
    const double beta = ctx.beta;
    const double mu = ctx.mu;
    const double h0 = ctx.h0;
    const double tol = 1e-12 * std::max(1.0, std::abs(h0));

    if (mu < 0.0) {
        if (h0 < 0.0) return "concave:none";
        if (h0 <= b) return "concave:single";
        return "concave:upper-band";
    }
    const double mu_c = mu_critical(b, beta);
    if (mu <= mu_c) {
        return h0 < 0.0 ? "monotone:none" : "monotone:single";
    }
    if (beta == 1.0) return h0 < 0.0 ? "logistic:dip" : "logistic:rise";
    const CriticalConstants cc = critical_constants(b, beta, mu);
    const bool below_fold = mu <= cc.mu_bif;
    const char* branch = below_fold ? "fold-pre" : "fold-post";
    if (std::abs(h0 - cc.H_R) <= tol) return std::string(branch) + ":tangent-lower";
    if (below_fold) {
        if (h0 > cc.H_R && h0 < cc.H_L) return "fold-pre:triple";
        if (std::abs(h0 - cc.H_L) <= tol) return "fold-pre:tangent-upper";
        return "fold-pre:single";
    }
    if (h0 > cc.H_R && h0 <= 0.0) return "fold-post:double";
    if (h0 > 0.0 && h0 < cc.H_L) return "fold-post:triple";
    if (std::abs(h0 - cc.H_L) <= tol) return "fold-post:tangent-upper";
    return h0 < 0.0 ? "fold-post:none" : "fold-post:single";
}

Equilibrium tumor_free(const ModelParams& params) {
    Equilibrium eq;
    eq.kind = EquilibriumKind::TumorFree;
    eq.T = 0.0;
    eq.E = params.sigma / params.eta;
    eq.simple = true;
    eq.case_label = "tumor-free";
    eq.residual = equilibrium_residual(params, eq.T, eq.E);
    return eq;
}

double S_value(const ScaledParams& sp, double T) {
    const double a = sp.a_s;
    const double mu = sp.mu;
    const double tb = pow_beta(T, sp.beta);
    return (a + mu) * tb * T + tb - (sp.b * (mu + a) - a * sp.sigma_s) * T;
}

double S_prime(const ScaledParams& sp, double T) {
    const double a = sp.a_s;
    const double mu = sp.mu;
    const double beta = sp.beta;
    return (a + mu) * (beta + 1.0) * pow_beta(T, beta) +
           beta * std::pow(T, beta - 1.0) - (sp.b * (mu + a) - a * sp.sigma_s);
}

namespace {

Equilibrium make_interior(const ScaledParams& sp, double T, bool simple,
                          const std::string& label) {
    Equilibrium eq;
    eq.kind = EquilibriumKind::Interior;
    eq.T = T;
    eq.E = growth_f(T, sp.r, sp.beta, sp.b) / sp.gamma;
    eq.simple = simple;
    eq.case_label = label;
    return eq;
}

}  // namespace

Equilibrium interior_equilibrium(const ScaledParams& sp) {
    if (sp.a_s != 0.0)
        throw hypothesis_error("interior_equilibrium: requires a_s = 0 (use continue_in_a)");
    const bool dagger = sp.sigma_s < sp.b && sp.mu <= 0.0;
    const bool ddagger =
        sp.sigma_s <= sp.b && sp.mu > 0.0 && sp.mu <= mu_critical(sp.b, sp.beta);
    if (!dagger && !ddagger)
        throw hypothesis_error(
            "interior_equilibrium: neither (sigma<b, mu<=0) nor (sigma<=b, 0<mu<=mu_c) holds");

    const double h0 = sp.b - sp.sigma_s;
    const HContext ctx{sp.mu, sp.b, sp.beta, h0};

    double T;
    if (sp.beta == 1.0 && sp.mu < 0.0) {
        // closed-form quadratic root
        const double mu = sp.mu;
        const double disc = (1.0 + mu * sp.b) * (1.0 + mu * sp.b) - 4.0 * mu * sp.sigma_s;
        T = (mu * sp.b - 1.0 + std::sqrt(disc)) / (2.0 * mu);
    } else if (sp.beta == 1.0 && sp.mu == 0.0) {
        T = sp.b - sp.sigma_s;
    } else {
        const auto roots = solve_triangle(ctx);
        if (roots.size() != 1)
            throw hypothesis_error("interior_equilibrium: expected a unique root on (0, b^(1/beta)]");
        T = roots.front().T;
    }

    // (1 + mu*T)(b - T^beta) = sigma must hold at the solution
    const double identity = (1.0 + sp.mu * T) * (sp.b - pow_beta(T, sp.beta));
    if (std::abs(identity - sp.sigma_s) > 1e-12 * std::max(1.0, std::abs(sp.sigma_s)))
        throw convergence_error("interior_equilibrium: equilibrium identity residual too large");

    Equilibrium eq = make_interior(sp, T, true, classify_case(ctx));
    eq.residual = std::abs(identity - sp.sigma_s);
    const double slope = (T > 0.0) ? h_mu_derivs(ctx, T).d1 : 1.0;
    eq.simple = std::abs(slope) > 1e-8;
    return eq;
}

Equilibrium continue_in_a(const Equilibrium& eq0, const ScaledParams& sp, double a_threshold) {
    if (sp.a_s == 0.0) return eq0;
    if (!(sp.a_s > 0.0) || sp.a_s > a_threshold)
        throw domain_violation("continue_in_a: a_s must lie in (0, threshold]");

    const double target = sp.b - sp.sigma_s;
    double T = eq0.T;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
        const double val = S_value(sp, T) - target;
        const double der = S_prime(sp, T);
        const double step = val / der;
        T -= step;
        if (!(T > 0.0) || !std::isfinite(T))
            throw convergence_error("continue_in_a: Newton iterate left the domain");
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(T)) &&
            std::abs(S_value(sp, T) - target) <= 1e-12 * std::max(1.0, std::abs(target))) {
            ok = true;
            break;
        }
    }
    if (!ok) throw convergence_error("continue_in_a: Newton did not converge in 50 iterations");
    if (!(std::abs(S_prime(sp, T)) > 1e-8))
        throw convergence_error("continue_in_a: continued root lost simplicity");

    Equilibrium eq = make_interior(sp, T, true, eq0.case_label + "+a");
    eq.residual = std::abs(S_value(sp, T) - target);
    return eq;
}

double equilibrium_residual(const ModelParams& params, double T, double E) {
    const State d = rhs_autonomous({T, E}, {T, E}, {T, E}, params);
    return std::max(std::abs(d.T), std::abs(d.E));
}

std::vector<Equilibrium> all_equilibria(const ModelParams& params) {
    std::vector<Equilibrium> out;
    out.push_back(tumor_free(params));

    ScaledParams sp = ScaledParams::from(params);
    const ScaledParams sp0 = [&] {
        ScaledParams s = sp;
        s.a_s = 0.0;
        return s;
    }();
    const HContext ctx{sp0.mu, sp0.b, sp0.beta, sp0.b - sp0.sigma_s};
    const std::string label = classify_case(ctx);
    for (const TriangleRoot& r : solve_triangle(ctx)) {
        if (r.T <= 0.0) continue;  // coincides with the tumor-free point
        Equilibrium eq = make_interior(sp0, r.T, r.slope_sign != 0, label);
        if (r.degenerate) eq.simple = false;
        if (sp.a_s > 0.0) {
            if (!eq.simple) continue;  // no analytic continuation from a tangency
            eq = continue_in_a(eq, sp);
        }
        eq.residual = equilibrium_residual(params, eq.T, eq.E);
        out.push_back(eq);
    }
    return out;
}

}  // namespace tumor_dde
