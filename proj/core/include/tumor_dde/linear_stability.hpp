#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "tumor_dde/equilibria.hpp"
#include "tumor_dde/mat2.hpp"
#include "tumor_dde/model.hpp"

namespace tumor_dde {

using cplx = std::complex<double>;

// Frozen linearization Y' = A0 Y + A1 Y(t-tau1) + A2 Y(t-tau2) at an
// equilibrium.  A1 and A2 are rank one with zero trace by construction.
struct Linearization {
    mat2 A0, A1, A2;
    Equilibrium at;
    mat2 total() const { return A0 + A1 + A2; }
};

Linearization linearize(const ModelParams& params, const Equilibrium& eq);

// Coefficients of P(lam) = p0 + p1 e^(-lam tau1) + p2 e^(-lam tau2)
//                        + p3 e^(-lam (tau1+tau2)),
// valid when det A1 = det A2 = 0.
struct CharCoeffs {
    double tr_a0, det_a0;  // p0(lam) = lam^2 - tr_a0*lam + det_a0
    double c01, tr_a1;     // p1(lam) = c01 - tr_a1*lam
    double c02, tr_a2;     // p2(lam) = c02 - tr_a2*lam
    double c12;            // p3(lam) = c12

    cplx eval(cplx lam, double tau1, double tau2) const;
};

CharCoeffs two_delay_char_coeffs(const mat2& A0, const mat2& A1, const mat2& A2);

// Quadratic characteristic polynomial in (lam, z, w) for general matrices:
// P(lam,z,w) = lam^2 - (tr A)lam + det A + (det B)z^2 + (c_hat - (tr B)lam)z
//            + (det C)w^2 - d_hat(lam,z)w,
// with c_hat and d_hat built from mixed-column determinants.
struct QuadraticCharPoly {
    mat2 A, B, C;

    cplx eval(cplx lam, cplx z, cplx w) const;
    cplx eval_delays(cplx lam, double tau1, double tau2) const;

    // Equal-delay reduction: lam^2-(tr A)lam+det A+(det(B+C))e^(-2 lam tau)
    //                        +(c_tilde-(tr(B+C))lam)e^(-lam tau)
    struct EqualDelay {
        double tr_a, det_a;
        double det_bc, c_tilde, tr_bc;
        cplx eval(cplx lam, double tau) const;
    };
    EqualDelay equal_delay() const;
};

inline QuadraticCharPoly quadratic_char_poly(const mat2& A, const mat2& B, const mat2& C) {
    return QuadraticCharPoly{A, B, C};
}

// Interior-equilibrium characteristic data:
// P(lam,tau1,tau2) = (lam-lambda1)(lam-lambda2) + R(p e^(-tau1 lam) - m e^(-tau2 lam)).
struct CharacteristicContext {
    double lambda1;  // T* f'(T*) < 0
    double lambda2;  // (p-m) h(T*) - eta
    double R;        // f(T*) h'(T*) T*
    double p, m;     // raw rates
    double p_s, m_s, mu;  // scaled counterparts, for reporting

    double N() const { return (m - p) * R; }
    double d_star() const { return lambda1 * lambda2 + R * (p - m); }
    cplx eval(cplx lam, double tau1, double tau2) const;
};

CharacteristicContext characteristic_context(const ModelParams& params, const Equilibrium& eq);

enum class StabilityLabel {
    Unstable,
    LocallyStable,
    LocallyAsymptoticallyStable,
    Inconclusive,
};

const char* to_string(StabilityLabel label);

struct StabilityVerdict {
    StabilityLabel label;
    double witness;      // machine-checkable: real root, Delta, D_star or bound
    std::string reason;
};

double tumor_free_delta(const ModelParams& params);  // Delta = gamma*sigma - r*b*eta
// Delay-independent verdict for (0, sigma/eta); witness is Delta, or the
// positive real root when unstable.
StabilityVerdict tumor_free_verdict(const ModelParams& params);
// Characteristic function (lam+eta)(lam - r b + gamma sigma/eta) at the
// tumor-free point.
std::function<cplx(cplx)> tumor_free_charfn(const ModelParams& params);

// D_star < 0 forces a positive real characteristic root for every delay pair.
StabilityVerdict d_star_verdict(const CharacteristicContext& ctx, double tau1 = 0.0,
                                double tau2 = 0.0);

StabilityVerdict zero_delay_verdict(const mat2& A_total);

// Equal-delay analysis: guaranteed-stability bound and first crossing.
struct TauCritical {
    bool stable_for_all_tau = false;  // no imaginary-axis crossing for any delay
    double tau_a = 0.0;               // guaranteed-stability bound (lambda1+lambda2)/N
    double y_hat = 0.0;               // crossing frequency, smallest positive root of G
    double tau_c = 0.0;               // smallest positive crossing delay
    std::vector<double> tau_k;        // tau_c + 2k pi/y_hat
};

TauCritical tau_critical(const CharacteristicContext& ctx, int k_count = 4);

// G(y) = y^4 + (lambda1^2+lambda2^2) y^2 + (lambda1 lambda2)^2 - N^2.
double crossing_poly_g(const CharacteristicContext& ctx, double y);

enum class HopfSide { Below, Above, StableAllTau };

struct HopfVerdict {
    HopfSide side;
    bool cycle_expected;  // small-amplitude stable cycle predicted past tau_c
    double tau_c;
    double y_hat;
};

HopfVerdict hopf_verdict(const CharacteristicContext& ctx, double tau);

// Rectangular counting contour; use re_min = 0 for the right half-plane.
struct ContourBox {
    double re_min, re_max;
    double im_min, im_max;
};

// Box beyond which the vanishing-ratio condition keeps the characteristic
// function root free.
ContourBox default_counting_box(const CharacteristicContext& ctx);

// Argument-principle zero count of an analytic function inside the box.
// Throws boundary_root_error when the boundary modulus drops below 1e-8.
int rhp_root_count(const std::function<cplx(cplx)>& fn, const ContourBox& box);
int rhp_root_count(const CharacteristicContext& ctx, double tau1, double tau2,
                   const ContourBox& box);

}  // namespace tumor_dde
