#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tumor_dde/equilibria.hpp"
#include "tumor_dde/errors.hpp"
#include "tumor_dde/linear_stability.hpp"

using namespace tumor_dde;

namespace {

// mu < 0 (p > m), sigma_s < b: hypothesis (i) territory with a Hopf regime.
ModelParams hopf_params(double tau1 = 0.0, double tau2 = 0.0) {
    return ModelParams::make(1.0, 1.0, 0.2, 1.0, 0.1, 1.0, 3.0, 1.0, 1.0, 0.0, tau1, tau2);
}

Equilibrium interior_of(const ModelParams& p) {
    return interior_equilibrium(ScaledParams::from(p));
}

mat2 rank1(std::mt19937_64& rng) {
    const double u1 = oracles::uniform(rng, -2.0, 2.0);
    const double u2 = oracles::uniform(rng, -2.0, 2.0);
    const double v1 = oracles::uniform(rng, -2.0, 2.0);
    const double v2 = oracles::uniform(rng, -2.0, 2.0);
    return mat2{u1 * v1, u1 * v2, u2 * v1, u2 * v2};
}

mat2 random_mat(std::mt19937_64& rng) {
    return mat2{oracles::uniform(rng, -2.0, 2.0), oracles::uniform(rng, -2.0, 2.0),
                oracles::uniform(rng, -2.0, 2.0), oracles::uniform(rng, -2.0, 2.0)};
}

}  // namespace

TEST_CASE("model linearizations are rank-1 in the delayed arguments, exactly") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 50; ++i) {
        const double beta = oracles::uniform(rng, 0.3, 1.0);
        const double b_hat = oracles::uniform(rng, 0.0, 0.3);
        const ModelParams p = ModelParams::make(
            oracles::uniform(rng, 0.5, 2.0), beta, b_hat, oracles::uniform(rng, 0.5, 2.0),
            oracles::uniform(rng, 0.05, 0.4), oracles::uniform(rng, 0.5, 2.0),
            oracles::uniform(rng, 1.5, 3.0), oracles::uniform(rng, 0.3, 1.2),
            oracles::uniform(rng, 0.5, 2.0), oracles::uniform(rng, 0.0, 0.005), 0.0, 0.0);
        const ScaledParams sp = ScaledParams::from(p);
        if (!(sp.sigma_s < sp.b)) continue;
        Equilibrium eq = tumor_free(p);
        for (int which = 0; which < 2; ++which) {
            const Linearization lin = linearize(p, eq);
            CHECK(lin.A1.det() == 0.0);
            CHECK(lin.A2.det() == 0.0);
            CHECK(lin.A1.trace() == 0.0);
            CHECK(lin.A2.trace() == 0.0);
            if (sp.mu > 0.0) break;
            ScaledParams sp0 = sp;
            sp0.a_s = 0.0;
            eq = interior_equilibrium(sp0);
            if (sp.a_s > 0.0) eq = continue_in_a(eq, sp);
        }
    }
}

TEST_CASE("two_delay_char_coeffs: degenerate and model cases") {
    SUBCASE("A1 = A2 = 0 collapses to the classical quadratic") {
        const mat2 A0{1.0, 2.0, 3.0, 4.0};
        const CharCoeffs c = two_delay_char_coeffs(A0, mat2{}, mat2{});
        CHECK(c.c01 == 0.0);
        CHECK(c.c02 == 0.0);
        CHECK(c.c12 == 0.0);
        std::mt19937_64 rng(67);
        for (int i = 0; i < 20; ++i) {
            const cplx lam(oracles::uniform(rng, -3, 3), oracles::uniform(rng, -3, 3));
            const cplx expect = lam * lam - A0.trace() * lam + A0.det();
            CHECK(std::abs(c.eval(lam, 0.7, 1.3) - expect) <= 1e-12 * std::abs(expect));
        }
    }
    SUBCASE("model matrices reproduce the closed-form mixed determinants") {
        const ModelParams p = hopf_params();
        const Equilibrium eq = interior_of(p);
        const Linearization lin = linearize(p, eq);
        const CharCoeffs c = two_delay_char_coeffs(lin.A0, lin.A1, lin.A2);
        const double hp = holling_h_prime(eq.T, p.g, p.a);
        CHECK(c.c01 == doctest::Approx(p.gamma * p.p * hp * eq.T * eq.E).epsilon(1e-13));
        CHECK(c.c02 == doctest::Approx(-p.gamma * p.m * hp * eq.T * eq.E).epsilon(1e-13));
        CHECK(c.c12 == 0.0);
    }
    SUBCASE("random rank-1 delayed parts agree with the determinant oracle") {
        std::mt19937_64 rng(71);
        for (int trial = 0; trial < 20; ++trial) {
            const mat2 A0 = random_mat(rng);
            const mat2 A1 = rank1(rng);
            const mat2 A2 = rank1(rng);
            if (std::abs(A1.det()) > 1e-13 || std::abs(A2.det()) > 1e-13) continue;
            const CharCoeffs c = two_delay_char_coeffs(A0, A1, A2);
            for (int i = 0; i < 20; ++i) {
                const cplx lam(oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2));
                const cplx z(oracles::uniform(rng, -1, 1), oracles::uniform(rng, -1, 1));
                const cplx w(oracles::uniform(rng, -1, 1), oracles::uniform(rng, -1, 1));
                // p0 + p1 z + p2 w + p3 z w against det(lam I - A0 - z A1 - w A2)
                const cplx via_coeffs = (lam * lam - c.tr_a0 * lam + c.det_a0) +
                                        (c.c01 - c.tr_a1 * lam) * z +
                                        (c.c02 - c.tr_a2 * lam) * w + c.c12 * z * w;
                const cplx via_det = oracles::det_char(A0, A1, A2, lam, z, w);
                CHECK(std::abs(via_coeffs - via_det) <=
                      1e-11 * std::max(1.0, std::abs(via_det)));
            }
        }
    }
    SUBCASE("full-rank delayed parts are rejected") {
        const mat2 full{1.0, 0.0, 0.0, 1.0};
        CHECK_THROWS_AS(two_delay_char_coeffs(mat2{}, full, mat2{}), hypothesis_error);
    }
}

TEST_CASE("general quadratic characteristic polynomial") {
    std::mt19937_64 rng(73);
    SUBCASE("B = C = 0 is the quadratic") {
        const mat2 A = random_mat(rng);
        const QuadraticCharPoly poly = quadratic_char_poly(A, mat2{}, mat2{});
        for (int i = 0; i < 10; ++i) {
            const cplx lam(oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2));
            const cplx expect = lam * lam - A.trace() * lam + A.det();
            CHECK(std::abs(poly.eval(lam, 0.3, 0.9) - expect) <= 1e-13 * std::abs(expect));
        }
    }
    SUBCASE("general matrices match the determinant oracle everywhere") {
        for (int trial = 0; trial < 20; ++trial) {
            const mat2 A = random_mat(rng);
            const mat2 B = random_mat(rng);
            const mat2 C = random_mat(rng);
            const QuadraticCharPoly poly = quadratic_char_poly(A, B, C);
            for (int i = 0; i < 10; ++i) {
                const cplx lam(oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2));
                const cplx z(oracles::uniform(rng, -1, 1), oracles::uniform(rng, -1, 1));
                const cplx w(oracles::uniform(rng, -1, 1), oracles::uniform(rng, -1, 1));
                const cplx expect = oracles::det_char(A, B, C, lam, z, w);
                CHECK(std::abs(poly.eval(lam, z, w) - expect) <=
                      1e-11 * std::max(1.0, std::abs(expect)));
            }
            // zero-delay collapse: z = w = 1
            const mat2 total = A + B + C;
            for (int i = 0; i < 5; ++i) {
                const cplx lam(oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2));
                const cplx expect = lam * lam - total.trace() * lam + total.det();
                CHECK(std::abs(poly.eval(lam, 1.0, 1.0) - expect) <=
                      1e-11 * std::max(1.0, std::abs(expect)));
            }
            // equal-delay reduction
            const auto eq = poly.equal_delay();
            for (int i = 0; i < 5; ++i) {
                const cplx lam(oracles::uniform(rng, -1, 1), oracles::uniform(rng, -1, 1));
                const double tau = oracles::uniform(rng, 0.0, 2.0);
                CHECK(std::abs(eq.eval(lam, tau) - poly.eval_delays(lam, tau, tau)) <=
                      1e-11);
            }
        }
    }
    SUBCASE("model matrices: the reduced characteristic matches at random delays") {
        const ModelParams p = hopf_params();
        const Equilibrium eq = interior_of(p);
        const Linearization lin = linearize(p, eq);
        const QuadraticCharPoly poly = quadratic_char_poly(lin.A0, lin.A1, lin.A2);
        const CharacteristicContext ctx = characteristic_context(p, eq);
        for (int i = 0; i < 50; ++i) {
            const cplx lam(oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2));
            const double t1 = oracles::uniform(rng, 0.0, 3.0);
            const double t2 = oracles::uniform(rng, 0.0, 3.0);
            const cplx via_poly = poly.eval_delays(lam, t1, t2);
            const cplx via_ctx = ctx.eval(lam, t1, t2);
            const cplx via_det = oracles::det_char(lin.A0, lin.A1, lin.A2, lam,
                                                   std::exp(-lam * t1), std::exp(-lam * t2));
            CHECK(std::abs(via_poly - via_det) <= 1e-12 * std::max(1.0, std::abs(via_det)));
            CHECK(std::abs(via_ctx - via_det) <= 1e-9 * std::max(1.0, std::abs(via_det)));
        }
    }
}

TEST_CASE("characteristic context basics") {
    const ModelParams p = hopf_params();
    const Equilibrium eq = interior_of(p);
    const CharacteristicContext ctx = characteristic_context(p, eq);

    CHECK(ctx.lambda1 < 0.0);
    CHECK(std::abs(ctx.eval(0.0, 0.7, 1.1) - ctx.d_star()) <= 1e-14);

    std::mt19937_64 rng(79);
    for (int i = 0; i < 100; ++i) {
        const cplx lam(oracles::uniform(rng, -3, 3), oracles::uniform(rng, -3, 3));
        const cplx quad =
            lam * lam - (ctx.lambda1 + ctx.lambda2) * lam + ctx.d_star();
        CHECK(std::abs(ctx.eval(lam, 0.0, 0.0) - quad) <= 1e-12 * std::max(1.0, std::abs(quad)));
    }
    CHECK_THROWS_AS(characteristic_context(p, tumor_free(p)), hypothesis_error);
}

TEST_CASE("discriminant identity over random valid contexts") {
    std::mt19937_64 rng(83);
    int tested = 0;
    for (int i = 0; i < 200 && tested < 100; ++i) {
        const double beta = oracles::uniform(rng, 0.3, 1.0);
        const ModelParams p = ModelParams::make(
            oracles::uniform(rng, 0.5, 2.0), beta, oracles::uniform(rng, 0.0, 0.3),
            oracles::uniform(rng, 0.5, 2.0), oracles::uniform(rng, 0.05, 0.3),
            oracles::uniform(rng, 0.5, 2.0), oracles::uniform(rng, 1.5, 3.0),
            oracles::uniform(rng, 0.3, 1.2), 1.0, oracles::uniform(rng, 0.0, 0.008), 0.0, 0.0);
        const ScaledParams sp = ScaledParams::from(p);
        if (!(sp.sigma_s < sp.b) || !(sp.mu <= 0.0)) continue;
        ScaledParams sp0 = sp;
        sp0.a_s = 0.0;
        Equilibrium eq = interior_equilibrium(sp0);
        if (sp.a_s > 0.0) eq = continue_in_a(eq, sp);
        const CharacteristicContext ctx = characteristic_context(p, eq);

        const double lhs = (ctx.lambda1 + ctx.lambda2) * (ctx.lambda1 + ctx.lambda2) -
                           4.0 * ctx.d_star();
        const double f = growth_f(eq.T, p.r, p.beta, p.effective_b());
        const double rhs = (ctx.lambda1 - ctx.lambda2) * (ctx.lambda1 - ctx.lambda2) +
                           4.0 * sp.mu * p.eta * eq.T * f /
                               ((1.0 + sp.a_s * eq.T) * (1.0 + sp.a_s * eq.T));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        ++tested;
    }
    CHECK(tested == 100);
}

TEST_CASE("under hypothesis (ii) the zero-delay roots are real") {
    std::mt19937_64 rng(89);
    for (int i = 0; i < 100; ++i) {
        const double b = oracles::uniform(rng, 0.3, 0.9);
        const double beta = oracles::uniform(rng, 0.3, 0.95);
        ScaledParams sp;
        sp.sigma_s = oracles::uniform(rng, 0.05, b * 0.95);
        sp.mu = oracles::uniform(rng, 0.05, 0.95) * mu_critical(b, beta);
        sp.p_s = 1.0;
        sp.m_s = 1.0 + sp.mu;
        sp.a_s = 0.0;
        sp.r = oracles::uniform(rng, 0.5, 2.0);
        sp.beta = beta;
        sp.b = b;
        sp.gamma = 1.0;
        sp.eta = oracles::uniform(rng, 0.5, 2.0);
        const Equilibrium eq = interior_equilibrium(sp);
        const ModelParams p = sp.unscale(1.0);
        const CharacteristicContext ctx = characteristic_context(p, eq);
        const double disc = (ctx.lambda1 + ctx.lambda2) * (ctx.lambda1 + ctx.lambda2) -
                            4.0 * ctx.d_star();
        CHECK(disc >= -1e-12);
    }
}

TEST_CASE("tumor-free verdict follows the Delta criterion") {
    SUBCASE("pinned examples") {
        // Delta = 0.5 > 0: asymptotically stable, roots -1 and -0.5
        const ModelParams stable = ModelParams::make(1, 1.0, 0.5, 1, 1, 1, 1, 1, 1, 0, 0, 0);
        CHECK(tumor_free_delta(stable) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(tumor_free_verdict(stable).label == StabilityLabel::LocallyAsymptoticallyStable);
        auto fn = tumor_free_charfn(stable);
        CHECK(std::abs(fn(cplx(-1.0, 0.0))) <= 1e-14);
        CHECK(std::abs(fn(cplx(-0.5, 0.0))) <= 1e-14);

        // Delta = -1 < 0: unstable with positive root 1
        const ModelParams unstable = ModelParams::make(2, 1.0, 0.0, 1, 1, 1, 1, 1, 1, 0, 0, 0);
        const StabilityVerdict v = tumor_free_verdict(unstable);
        CHECK(v.label == StabilityLabel::Unstable);
        CHECK(v.witness == doctest::Approx(1.0).epsilon(1e-14));

        // gamma*sigma = r*b*eta: boundary
        const ModelParams boundary = ModelParams::make(1, 1.0, 0.0, 1, 1, 1, 1, 1, 1, 0, 0, 0);
        CHECK(tumor_free_verdict(boundary).label == StabilityLabel::LocallyStable);
    }
    SUBCASE("random draws with root counting") {
        std::mt19937_64 rng(97);
        for (int i = 0; i < 40; ++i) {
            const ModelParams p = ModelParams::make(
                oracles::uniform(rng, 0.5, 2.0), oracles::uniform(rng, 0.3, 1.0),
                oracles::uniform(rng, 0.0, 0.4), oracles::uniform(rng, 0.5, 2.0),
                oracles::uniform(rng, 0.2, 2.0), oracles::uniform(rng, 0.5, 2.0), 2.0, 1.0,
                1.0, 0.0, oracles::uniform(rng, 0.0, 2.0), oracles::uniform(rng, 0.0, 2.0));
            const double delta = tumor_free_delta(p);
            if (std::abs(delta) < 1e-3) continue;
            const StabilityVerdict v = tumor_free_verdict(p);
            const double root = p.r * p.effective_b() - p.gamma * p.sigma / p.eta;
            const ContourBox box{0.0, 2.0 * std::abs(root) + 2.0 + p.eta,
                                 -2.0 - p.eta, 2.0 + p.eta};
            const int count = rhp_root_count(tumor_free_charfn(p), box);
            if (delta > 0.0) {
                CHECK(v.label == StabilityLabel::LocallyAsymptoticallyStable);
                CHECK(count == 0);
            } else {
                CHECK(v.label == StabilityLabel::Unstable);
                CHECK(count == 1);
            }
        }
    }
}

TEST_CASE("D_star verdict") {
    SUBCASE("mu = 0 gives the closed-form positive value") {
        ScaledParams sp;
        sp.sigma_s = 0.3;
        sp.mu = 0.0;
        sp.p_s = 1.0;
        sp.m_s = 1.0;
        sp.a_s = 0.0;
        sp.r = 1.3;
        sp.beta = 0.6;
        sp.b = 0.8;
        sp.gamma = 1.0;
        sp.eta = 0.7;
        const Equilibrium eq = interior_equilibrium(sp);
        const CharacteristicContext ctx = characteristic_context(sp.unscale(1.0), eq);
        const double expect = sp.r * sp.beta * sp.eta * (sp.b - sp.sigma_s);
        CHECK(ctx.d_star() == doctest::Approx(expect).epsilon(1e-10));
        CHECK(d_star_verdict(ctx).label == StabilityLabel::Inconclusive);
    }
    SUBCASE("beta = 1, sigma < b keeps D_star positive for mu >= 0") {
        for (double mu : {0.0, 0.3, 0.9, 1.2}) {
            ScaledParams sp;
            sp.sigma_s = 0.3;
            sp.mu = mu;
            sp.p_s = 1.0;
            sp.m_s = 1.0 + mu;
            sp.a_s = 0.0;
            sp.r = 1.0;
            sp.beta = 1.0;
            sp.b = 0.8;
            sp.gamma = 1.0;
            sp.eta = 1.0;
            if (mu > 1.0 / sp.b) continue;
            const Equilibrium eq = interior_equilibrium(sp);
            const CharacteristicContext ctx = characteristic_context(sp.unscale(1.0), eq);
            CHECK(ctx.d_star() > 0.0);
        }
    }
    SUBCASE("negative D_star produces a bracketed positive real root") {
        CharacteristicContext ctx;
        ctx.lambda1 = -1.0;
        ctx.lambda2 = -0.5;
        ctx.R = 1.0;
        ctx.p = 1.0;
        ctx.m = 3.0;
        ctx.p_s = 1.0;
        ctx.m_s = 3.0;
        ctx.mu = 2.0;
        REQUIRE(ctx.d_star() < 0.0);
        for (auto [t1, t2] : {std::pair{0.0, 0.0}, {0.8, 0.3}, {2.0, 5.0}}) {
            const StabilityVerdict v = d_star_verdict(ctx, t1, t2);
            CHECK(v.label == StabilityLabel::Unstable);
            CHECK(v.witness > 0.0);
            CHECK(std::abs(ctx.eval(cplx(v.witness, 0.0), t1, t2)) <= 1e-9);
        }
    }
}

TEST_CASE("zero-delay verdict cases") {
    CHECK(zero_delay_verdict(mat2{-1, 0, 0, -2}).label ==
          StabilityLabel::LocallyAsymptoticallyStable);
    CHECK(zero_delay_verdict(mat2{1, 0, 0, -2}).label == StabilityLabel::Unstable);
    CHECK(zero_delay_verdict(mat2{0, 1, -1, 0}).label == StabilityLabel::Inconclusive);
    CHECK(zero_delay_verdict(mat2{0, 1, 1, 0}).label == StabilityLabel::Unstable);
}

TEST_CASE("tau_critical: frozen worked example and oracle agreement") {
    CharacteristicContext ctx;
    ctx.lambda1 = -1.0;
    ctx.lambda2 = -2.0;
    ctx.R = 1.5;
    ctx.p = 3.0;
    ctx.m = 1.0;
    ctx.p_s = 3.0;
    ctx.m_s = 1.0;
    ctx.mu = -2.0;
    REQUIRE(ctx.N() == -3.0);

    const TauCritical tc = tau_critical(ctx);
    CHECK_FALSE(tc.stable_for_all_tau);
    const double y_frozen = std::sqrt((-5.0 + std::sqrt(45.0)) / 2.0);
    CHECK(tc.y_hat == doctest::Approx(y_frozen).epsilon(1e-14));
    CHECK(tc.y_hat == doctest::Approx(oracles::g_root_bisect(ctx, 10.0)).epsilon(1e-10));
    CHECK(std::abs(ctx.eval(cplx(0.0, tc.y_hat), tc.tau_c, tc.tau_c)) <= 1e-10);
    CHECK(tc.tau_a == doctest::Approx(1.0).epsilon(1e-14));  // (-3)/(-3)
    CHECK(tc.tau_a <= tc.tau_c);
    REQUIRE(tc.tau_k.size() >= 2);
    CHECK(tc.tau_k[1] - tc.tau_k[0] ==
          doctest::Approx(2.0 * 3.14159265358979312 / tc.y_hat).epsilon(1e-12));
}

TEST_CASE("tau_critical: random Hopf-regime contexts") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 100; ++i) {
        CharacteristicContext ctx;
        ctx.lambda1 = -oracles::uniform(rng, 0.05, 2.0);
        ctx.lambda2 = -oracles::uniform(rng, 0.05, 2.0);
        const double n = -ctx.lambda1 * ctx.lambda2 * oracles::uniform(rng, 1.05, 3.0);
        ctx.R = oracles::uniform(rng, 0.2, 2.0);
        ctx.m = 1.0;
        ctx.p = 1.0 - n / ctx.R;  // (m - p) R = n < 0
        ctx.m_s = ctx.m;
        ctx.p_s = ctx.p;
        ctx.mu = ctx.m_s - ctx.p_s;
        REQUIRE(ctx.N() == doctest::Approx(n).epsilon(1e-12));

        // G(0) < 0 guarantees the crossing frequency exists
        CHECK(crossing_poly_g(ctx, 0.0) < 0.0);
        const TauCritical tc = tau_critical(ctx);
        REQUIRE_FALSE(tc.stable_for_all_tau);
        CHECK(tc.y_hat > 0.0);
        CHECK(tc.tau_c > 0.0);
        CHECK(tc.tau_a > 0.0);
        CHECK(tc.tau_a <= tc.tau_c + 1e-12);
        CHECK(std::abs(ctx.eval(cplx(0.0, tc.y_hat), tc.tau_c, tc.tau_c)) <= 1e-10);
        CHECK(tc.y_hat ==
              doctest::Approx(oracles::g_root_bisect(ctx, 1.0)).epsilon(1e-9));
        // smallest positive: no earlier crossing delay with the same frequency
        CHECK(tc.tau_c - 2.0 * 3.14159265358979312 / tc.y_hat < 0.0);
    }
}

TEST_CASE("tau_critical: delay-independent branch and hypothesis errors") {
    CharacteristicContext ctx;
    ctx.lambda1 = -1.0;
    ctx.lambda2 = -2.0;
    ctx.R = 0.5;
    ctx.p = 2.0;
    ctx.m = 1.0;  // N = -0.5, |N| < lambda1*lambda2
    ctx.p_s = 2.0;
    ctx.m_s = 1.0;
    ctx.mu = -1.0;
    const TauCritical tc = tau_critical(ctx);
    CHECK(tc.stable_for_all_tau);
    CHECK(hopf_verdict(ctx, 10.0).side == HopfSide::StableAllTau);

    CharacteristicContext bad = ctx;
    bad.lambda1 = 1.0;
    bad.lambda2 = 2.0;
    CHECK_THROWS_WITH_AS(tau_critical(bad), doctest::Contains("lambda1 + lambda2"),
                         hypothesis_error);

    CharacteristicContext neg = ctx;
    neg.p = 1.0;
    neg.m = 9.0;  // N = 4 > lambda1*lambda2 = 2: D_star < 0
    CHECK_THROWS_WITH_AS(tau_critical(neg), doctest::Contains("N < lambda1*lambda2"),
                         hypothesis_error);
}

TEST_CASE("hopf verdict sides") {
    const ModelParams p = hopf_params();
    const CharacteristicContext ctx = characteristic_context(p, interior_of(p));
    const TauCritical tc = tau_critical(ctx);
    REQUIRE_FALSE(tc.stable_for_all_tau);
    CHECK(hopf_verdict(ctx, 0.0).side == HopfSide::Below);
    CHECK_FALSE(hopf_verdict(ctx, 0.0).cycle_expected);
    const HopfVerdict above = hopf_verdict(ctx, 1.05 * tc.tau_c);
    CHECK(above.side == HopfSide::Above);
    CHECK(above.cycle_expected);
}

TEST_CASE("rhp_root_count on a known polynomial") {
    auto poly = [](cplx lam) {
        return (lam - cplx(1.0, 0.0)) * (lam - cplx(2.0, -3.0)) * (lam + cplx(1.0, 0.0));
    };
    CHECK(rhp_root_count(poly, ContourBox{0.0, 3.0, -4.0, 4.0}) == 2);
    CHECK(rhp_root_count(poly, ContourBox{0.0, 3.0, 0.5, 4.0}) == 0);
    CHECK(rhp_root_count(poly, ContourBox{0.0, 3.0, -4.0, -0.5}) == 1);
    // subdivision invariance
    const int whole = rhp_root_count(poly, ContourBox{0.0, 3.0, -4.0, 4.0});
    const int left = rhp_root_count(poly, ContourBox{0.0, 1.5, -4.0, 4.0});
    const int right = rhp_root_count(poly, ContourBox{1.5, 3.0, -4.0, 4.0});
    CHECK(whole == left + right);
    // a root sitting on the contour is flagged
    CHECK_THROWS_AS(rhp_root_count(poly, ContourBox{0.0, 1.0, -4.0, 4.0}),
                    boundary_root_error);
}

TEST_CASE("rhp count jumps 0 -> 2 across the Hopf crossing") {
    const ModelParams p = hopf_params();
    const CharacteristicContext ctx = characteristic_context(p, interior_of(p));
    const TauCritical tc = tau_critical(ctx);
    const ContourBox box = default_counting_box(ctx);
    const double delta = 1e-3;
    CHECK(rhp_root_count(ctx, tc.tau_c - delta, tc.tau_c - delta, box) == 0);
    CHECK(rhp_root_count(ctx, tc.tau_c + delta, tc.tau_c + delta, box) == 2);
    // subdivision invariance on the transcendental function
    const double xm = 0.5 * (box.re_min + box.re_max);
    const int whole = rhp_root_count(ctx, tc.tau_c + delta, tc.tau_c + delta, box);
    const int lo = rhp_root_count(ctx, tc.tau_c + delta, tc.tau_c + delta,
                                  ContourBox{box.re_min, xm, box.im_min, box.im_max});
    const int hi = rhp_root_count(ctx, tc.tau_c + delta, tc.tau_c + delta,
                                  ContourBox{xm, box.re_max, box.im_min, box.im_max});
    CHECK(whole == lo + hi);
}
