#include "tumor_dde/linear_stability.hpp"

#include <cmath>
#include <numbers>

#include "tumor_dde/errors.hpp"
#include "tumor_dde/rootfind.hpp"

namespace tumor_dde {

namespace {

constexpr double kEqTol = 1e-12;

bool near_zero(double x, double scale) { return std::abs(x) <= kEqTol * std::max(1.0, scale); }

}  // namespace

Linearization linearize(const ModelParams& params, const Equilibrium& eq) {
    const double b = params.effective_b();
    const double T = eq.T;
    const double E = eq.E;
    const double f = growth_f(T, params.r, params.beta, b);
    const double tfp = growth_tf_prime(T, params.r, params.beta);
    const double h = holling_h(T, params.g, params.a);
    const double hp = holling_h_prime(T, params.g, params.a);

    Linearization lin;
    lin.at = eq;
    lin.A0 = mat2{f - params.gamma * E + tfp, -params.gamma * T,
                  0.0, (params.p - params.m) * h - params.eta};
    lin.A1 = mat2{0.0, 0.0, params.p * hp * E, 0.0};
    lin.A2 = mat2{0.0, 0.0, -params.m * hp * E, 0.0};
    return lin;
}

cplx CharCoeffs::eval(cplx lam, double tau1, double tau2) const {
    const cplx p0 = lam * lam - tr_a0 * lam + det_a0;
    const cplx p1 = c01 - tr_a1 * lam;
    const cplx p2 = c02 - tr_a2 * lam;
    return p0 + p1 * std::exp(-lam * tau1) + p2 * std::exp(-lam * tau2) +
           c12 * std::exp(-lam * (tau1 + tau2));
}

CharCoeffs two_delay_char_coeffs(const mat2& A0, const mat2& A1, const mat2& A2) {
    const double scale1 = 1.0 + std::abs(A1.a11 * A1.a22) + std::abs(A1.a12 * A1.a21);
    const double scale2 = 1.0 + std::abs(A2.a11 * A2.a22) + std::abs(A2.a12 * A2.a21);
    if (std::abs(A1.det()) > 1e-12 * scale1 || std::abs(A2.det()) > 1e-12 * scale2)
        throw hypothesis_error(
            "two_delay_char_coeffs: needs det A1 = det A2 = 0 (use quadratic_char_poly)");
    CharCoeffs c;
    c.tr_a0 = A0.trace();
    c.det_a0 = A0.det();
    c.c01 = mixed_det(A0, A1);
    c.tr_a1 = A1.trace();
    c.c02 = mixed_det(A0, A2);
    c.tr_a2 = A2.trace();
    c.c12 = mixed_det(A1, A2);
    return c;
}

cplx QuadraticCharPoly::eval(cplx lam, cplx z, cplx w) const {
    const double c_hat = mixed_det(A, B);
    // d_hat(lam,z) = det(c^1|m^2) + det(m^1|c^2) with M = lam I - A - z B
    const cplx m11 = lam - A.a11 - z * B.a11;
    const cplx m12 = -A.a12 - z * B.a12;
    const cplx m21 = -A.a21 - z * B.a21;
    const cplx m22 = lam - A.a22 - z * B.a22;
    const cplx d_hat = (C.a11 * m22 - m12 * C.a21) + (m11 * C.a22 - C.a12 * m21);
    return lam * lam - A.trace() * lam + A.det() + B.det() * z * z +
           (c_hat - B.trace() * lam) * z + C.det() * w * w - d_hat * w;
}

cplx QuadraticCharPoly::eval_delays(cplx lam, double tau1, double tau2) const {
    return eval(lam, std::exp(-lam * tau1), std::exp(-lam * tau2));
}

QuadraticCharPoly::EqualDelay QuadraticCharPoly::equal_delay() const {
    const mat2 bc = B + C;
    EqualDelay e;
    e.tr_a = A.trace();
    e.det_a = A.det();
    e.det_bc = bc.det();
    e.c_tilde = mixed_det(A, bc);
    e.tr_bc = bc.trace();
    return e;
}

cplx QuadraticCharPoly::EqualDelay::eval(cplx lam, double tau) const {
    const cplx z = std::exp(-lam * tau);
    return lam * lam - tr_a * lam + det_a + det_bc * z * z + (c_tilde - tr_bc * lam) * z;
}

cplx CharacteristicContext::eval(cplx lam, double tau1, double tau2) const {
    return (lam - lambda1) * (lam - lambda2) +
           R * (p * std::exp(-tau1 * lam) - m * std::exp(-tau2 * lam));
}

CharacteristicContext characteristic_context(const ModelParams& params, const Equilibrium& eq) {
    if (!(eq.T > 0.0))
        throw hypothesis_error("characteristic_context: needs an interior equilibrium (T > 0)");
    const double b = params.effective_b();
    const double f = growth_f(eq.T, params.r, params.beta, b);
    if (std::abs(f - params.gamma * eq.E) > 1e-9 * std::max(1.0, std::abs(f)))
        throw hypothesis_error("characteristic_context: point does not satisfy f(T) = gamma E");

    CharacteristicContext ctx;
    ctx.lambda1 = growth_tf_prime(eq.T, params.r, params.beta);
    ctx.lambda2 = (params.p - params.m) * holling_h(eq.T, params.g, params.a) - params.eta;
    ctx.R = f * holling_h_prime(eq.T, params.g, params.a) * eq.T;
    ctx.p = params.p;
    ctx.m = params.m;
    ctx.p_s = params.p / (params.eta * params.g);
    ctx.m_s = params.m / (params.eta * params.g);
    ctx.mu = ctx.m_s - ctx.p_s;
    return ctx;
}

const char* to_string(StabilityLabel label) {
    switch (label) {
        case StabilityLabel::Unstable: return "Unstable";
        case StabilityLabel::LocallyStable: return "LocallyStable";
        case StabilityLabel::LocallyAsymptoticallyStable: return "LocallyAsymptoticallyStable";
        case StabilityLabel::Inconclusive: return "Inconclusive";
    }
    return "?";
}

double tumor_free_delta(const ModelParams& params) {
    return params.gamma * params.sigma - params.r * params.effective_b() * params.eta;
}

StabilityVerdict tumor_free_verdict(const ModelParams& params) {
    const double delta = tumor_free_delta(params);
    const double scale = std::abs(params.gamma * params.sigma) +
                         std::abs(params.r * params.effective_b() * params.eta);
    if (near_zero(delta, scale))
        return {StabilityLabel::LocallyStable, delta, "Delta = 0 boundary case"};
    if (delta < 0.0) {
        const double root = params.r * params.effective_b() - params.gamma * params.sigma / params.eta;
        return {StabilityLabel::Unstable, root, "Delta < 0: positive real characteristic root"};
    }
    return {StabilityLabel::LocallyAsymptoticallyStable, delta,
            "Delta > 0: both roots real negative, delay-independent"};
}

std::function<cplx(cplx)> tumor_free_charfn(const ModelParams& params) {
    const double eta = params.eta;
    const double c = params.r * params.effective_b() - params.gamma * params.sigma / params.eta;
    return [eta, c](cplx lam) { return (lam + eta) * (lam - c); };
}

StabilityVerdict d_star_verdict(const CharacteristicContext& ctx, double tau1, double tau2) {
    const double d = ctx.d_star();
    const double scale = std::abs(ctx.lambda1 * ctx.lambda2) + std::abs(ctx.R * (ctx.p - ctx.m));
    if (near_zero(d, scale))
        return {StabilityLabel::Inconclusive, d, "D_star = 0 boundary case"};
    if (d > 0.0)
        return {StabilityLabel::Inconclusive, d, "D_star > 0: defer to delay analysis"};
    // D_star < 0: the real characteristic function goes from D_star to +inf
    auto fn = [&](double x) { return std::real(ctx.eval(cplx(x, 0.0), tau1, tau2)); };
    double hi = 1.0;
    while (fn(hi) <= 0.0) hi *= 2.0;
    const double root = bisect(fn, 0.0, hi);
    return {StabilityLabel::Unstable, root,
            "D_star < 0: positive real root for every delay pair"};
}

StabilityVerdict zero_delay_verdict(const mat2& A_total) {
    const double tr = A_total.trace();
    const double det = A_total.det();
    const double tr_scale = std::abs(A_total.a11) + std::abs(A_total.a22);
    const double det_scale = std::abs(A_total.a11 * A_total.a22) + std::abs(A_total.a12 * A_total.a21);
    const bool tr_zero = near_zero(tr, tr_scale);
    const bool det_zero = near_zero(det, det_scale);
    if (!det_zero && det < 0.0) {
        // saddle: one eigenvalue is real positive whatever the trace
        const double root = 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
        return {StabilityLabel::Unstable, root, "det < 0: saddle point"};
    }
    if (!tr_zero && tr < 0.0 && !det_zero && det > 0.0)
        return {StabilityLabel::LocallyAsymptoticallyStable, tr, "tr < 0 and det > 0"};
    if (!tr_zero && tr > 0.0) return {StabilityLabel::Unstable, tr, "tr > 0"};
    return {StabilityLabel::Inconclusive, tr, "trace/determinant test is inconclusive here"};
}

double crossing_poly_g(const CharacteristicContext& ctx, double y) {
    const double l1 = ctx.lambda1;
    const double l2 = ctx.lambda2;
    const double n = ctx.N();
    const double y2 = y * y;
    return y2 * y2 + (l1 * l1 + l2 * l2) * y2 + (l1 * l2 - n) * (l1 * l2 + n);
}

TauCritical tau_critical(const CharacteristicContext& ctx, int k_count) {
    const double l1 = ctx.lambda1;
    const double l2 = ctx.lambda2;
    const double n = ctx.N();
    const double prod = l1 * l2;
    const double scale = std::abs(prod) + std::abs(n);

    if (!(l1 + l2 < 0.0))
        throw hypothesis_error("tau_critical: hypothesis lambda1 + lambda2 < 0 violated");
    if (!(n < prod))
        throw hypothesis_error("tau_critical: hypothesis N < lambda1*lambda2 violated (D_star <= 0)");
    TauCritical out;
    if (near_zero(prod + n, scale))
        throw hypothesis_error("tau_critical: degenerate boundary lambda1*lambda2 = -N (G(0) = 0)");
    if (prod > -n) {
        // no imaginary-axis crossing exists for any delay
        out.stable_for_all_tau = true;
        return out;
    }

    out.tau_a = (l1 + l2) / n;  // both negative here, bound is positive

    const double s = l1 * l1 + l2 * l2;
    const double pi_term = prod * prod - n * n;  // negative in this branch
    const double y2 = (-s + std::sqrt(s * s - 4.0 * pi_term)) / 2.0;
    const double y = std::sqrt(y2);
    out.y_hat = y;

    // cos(tau y) and sin(tau y) are pinned by the crossing system; the
    // two-argument angle removes the arctan branch ambiguity
    const double c = (prod - y2) / n;
    const double sn = (l1 + l2) * y / n;
    double theta = std::atan2(sn, c);
    const double two_pi = 2.0 * std::numbers::pi;
    while (theta <= 0.0) theta += two_pi;
    out.tau_c = theta / y;

    const double res = std::abs(ctx.eval(cplx(0.0, y), out.tau_c, out.tau_c));
    if (res > 1e-10 * std::max(1.0, scale + y2))
        throw convergence_error("tau_critical: crossing residual check failed");

    out.tau_k.reserve(static_cast<std::size_t>(std::max(k_count, 0)));
    for (int k = 0; k < k_count; ++k) out.tau_k.push_back(out.tau_c + two_pi * k / y);
    return out;
}

HopfVerdict hopf_verdict(const CharacteristicContext& ctx, double tau) {
    const TauCritical tc = tau_critical(ctx);
    if (tc.stable_for_all_tau) return {HopfSide::StableAllTau, false, 0.0, 0.0};
    if (tau < tc.tau_c) return {HopfSide::Below, false, tc.tau_c, tc.y_hat};
    return {HopfSide::Above, true, tc.tau_c, tc.y_hat};
}

ContourBox default_counting_box(const CharacteristicContext& ctx) {
    const double m = 1.0 + 2.0 * std::max({std::abs(ctx.lambda1), std::abs(ctx.lambda2),
                                           std::abs(ctx.N())});
    return ContourBox{0.0, m, -m, m};
}

namespace {

constexpr double kBoundaryModulusFloor = 1e-8;
constexpr int kMaxSplitDepth = 48;

struct WindingAccumulator {
    double total = 0.0;
    double min_modulus = std::numeric_limits<double>::infinity();
};

void accumulate_edge(const std::function<cplx(cplx)>& fn, cplx z0, cplx z1, cplx f0, cplx f1,
                     int depth, WindingAccumulator& acc) {
    const double d = std::arg(f1 / f0);
    if (std::abs(d) < std::numbers::pi / 2.0 || depth >= kMaxSplitDepth) {
        if (depth >= kMaxSplitDepth)
            throw boundary_root_error("rhp_root_count: argument refinement hit depth limit");
        acc.total += d;
        return;
    }
    const cplx zm = 0.5 * (z0 + z1);
    const cplx fm = fn(zm);
    acc.min_modulus = std::min(acc.min_modulus, std::abs(fm));
    accumulate_edge(fn, z0, zm, f0, fm, depth + 1, acc);
    accumulate_edge(fn, zm, z1, fm, f1, depth + 1, acc);
}

}  // namespace

int rhp_root_count(const std::function<cplx(cplx)>& fn, const ContourBox& box) {
    const cplx corners[4] = {
        {box.re_min, box.im_min}, {box.re_max, box.im_min},
        {box.re_max, box.im_max}, {box.re_min, box.im_max}};

    WindingAccumulator acc;
    const int base = 64;  // per-edge seed samples before adaptive refinement
    for (int e = 0; e < 4; ++e) {
        const cplx za = corners[e];
        const cplx zb = corners[(e + 1) % 4];
        cplx zp = za;
        cplx fp = fn(zp);
        acc.min_modulus = std::min(acc.min_modulus, std::abs(fp));
        for (int i = 1; i <= base; ++i) {
            const double t = static_cast<double>(i) / base;
            const cplx z = za + t * (zb - za);
            const cplx f = fn(z);
            acc.min_modulus = std::min(acc.min_modulus, std::abs(f));
            accumulate_edge(fn, zp, z, fp, f, 0, acc);
            zp = z;
            fp = f;
        }
    }
    if (acc.min_modulus <= kBoundaryModulusFloor)
        throw boundary_root_error("rhp_root_count: characteristic root on or near the contour");

    const double winding = acc.total / (2.0 * std::numbers::pi);
    const double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 0.05)
        throw convergence_error("rhp_root_count: winding number failed to settle on an integer");
    return static_cast<int>(rounded);
}

int rhp_root_count(const CharacteristicContext& ctx, double tau1, double tau2,
                   const ContourBox& box) {
    return rhp_root_count([&](cplx lam) { return ctx.eval(lam, tau1, tau2); }, box);
}

}  // namespace tumor_dde
