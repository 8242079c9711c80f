#include "tumor_dde/switching_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tumor_dde/errors.hpp"
#include "tumor_dde/rootfind.hpp"

namespace tumor_dde {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

double feasibility_value(const CharacteristicContext& ctx, double y) {
    const double q0 = ctx.lambda1 * ctx.lambda2 - y * y;
    const double q1 = -(ctx.lambda1 + ctx.lambda2) * y;
    const double h2 = q0 * q0 + q1 * q1;
    const double k = ctx.R * ctx.R * (ctx.p * ctx.p - ctx.m * ctx.m);
    return std::abs(h2 + k) - 2.0 * ctx.R * ctx.p * std::sqrt(h2);
}

CrossingGeometry crossing_geometry(const CharacteristicContext& ctx, double y) {
    CrossingGeometry g;
    g.q0 = ctx.lambda1 * ctx.lambda2 - y * y;
    g.q1 = -(ctx.lambda1 + ctx.lambda2) * y;
    const double h2 = g.q0 * g.q0 + g.q1 * g.q1;
    g.hmag = std::sqrt(h2);
    if (!(g.hmag > 0.0))
        throw hypothesis_error("crossing_geometry: H(y) = 0, continuous angle undefined");
    g.phi1 = std::atan2(g.q1, g.q0);
    const double k = ctx.R * ctx.R * (ctx.p * ctx.p - ctx.m * ctx.m);
    const double ratio = -(h2 + k) / (2.0 * ctx.R * ctx.p * g.hmag);
    g.feasible = std::abs(ratio) <= 1.0 + 1e-12;
    g.vartheta = std::acos(clamp_unit(ratio));
    return g;
}

std::vector<double> default_y_grid(const CharacteristicContext& ctx, std::size_t n) {
    // H(y) >= y^2 - |lambda1 lambda2|, so the inequality surely fails once
    // y^2 > |lambda1 lambda2| + R(p+m)
    const double y_up =
        std::sqrt(std::abs(ctx.lambda1 * ctx.lambda2) + ctx.R * (ctx.p + ctx.m)) * 1.25 + 1.0;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = y_up * static_cast<double>(i + 1) / static_cast<double>(n);
    return grid;
}

std::vector<std::pair<double, double>> feasible_set(const CharacteristicContext& ctx,
                                                    const std::vector<double>& y_grid) {
    std::vector<std::pair<double, double>> intervals;
    if (y_grid.empty()) return intervals;

    auto fv = [&](double y) { return feasibility_value(ctx, y); };
    const RootOptions opts{1e-10, 200, false};

    bool inside = fv(y_grid.front()) <= 0.0;
    double start = y_grid.front();
    for (std::size_t i = 1; i < y_grid.size(); ++i) {
        const bool now = fv(y_grid[i]) <= 0.0;
        if (now == inside) continue;
        // refine the boundary crossing between the two grid samples
        const double edge = bisect(fv, y_grid[i - 1], y_grid[i], opts);
        if (inside) {
            intervals.emplace_back(start, edge);
        } else {
            start = edge;
        }
        inside = now;
    }
    if (inside) intervals.emplace_back(start, y_grid.back());
    return intervals;
}

std::vector<SwitchingCurvePoint> curve_points(const CharacteristicContext& ctx, double y,
                                              int s, int k, std::optional<double> phi1_unwrapped,
                                              int* dropped) {
    std::vector<SwitchingCurvePoint> out;
    const CrossingGeometry g = crossing_geometry(ctx, y);
    if (!g.feasible) return out;
    const double phi1 = phi1_unwrapped.value_or(g.phi1);
    const double rp = ctx.R * ctx.p;
    const double rm = ctx.R * ctx.m;

    for (int sign : {+1, -1}) {
        const double tau1 = (sign * g.vartheta - phi1 + kTwoPi * s) / y;
        if (tau1 < 0.0) {
            if (dropped) ++*dropped;
            continue;
        }
        // solve the two real crossing equations for (cos, sin) of tau2*y;
        // the two-argument angle fixes the quadrant, k is the only freedom
        const double c2 = (g.q0 + rp * std::cos(tau1 * y)) / rm;
        const double s2 = (rp * std::sin(tau1 * y) - g.q1) / rm;
        double theta2 = std::atan2(s2, c2);
        if (theta2 < 0.0) theta2 += kTwoPi;
        const double tau2 = (theta2 + kTwoPi * k) / y;
        if (tau2 < 0.0) {
            if (dropped) ++*dropped;
            continue;
        }
        SwitchingCurvePoint pt;
        pt.y = y;
        pt.tau1 = tau1;
        pt.tau2 = tau2;
        pt.sign = sign;
        pt.s = s;
        pt.k = k;
        pt.residual = std::abs(ctx.eval(cplx(0.0, y), tau1, tau2));
        if (pt.residual > 1e-8 * (1.0 + y * y)) {
            if (dropped) ++*dropped;
            continue;
        }
        out.push_back(pt);
    }
    return out;
}

namespace {

// Principal angles unwrapped into a continuous branch along the samples.
std::vector<double> unwrap_phi1(const CharacteristicContext& ctx,
                                const std::vector<double>& ys) {
    std::vector<double> phi(ys.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        double v = crossing_geometry(ctx, ys[i]).phi1;
        if (i > 0) {
            while (v - prev > std::numbers::pi) v -= kTwoPi;
            while (v - prev < -std::numbers::pi) v += kTwoPi;
        }
        phi[i] = v;
        prev = v;
    }
    return phi;
}

}  // namespace

CurveFamily trace_curves(const CharacteristicContext& ctx, const std::vector<double>& y_grid,
                         std::size_t samples_per_interval, int s_max, int k_max) {
    CurveFamily fam;
    fam.feasible = feasible_set(ctx, y_grid);
    if (fam.feasible.empty()) return fam;

    for (int sign : {+1, -1})
        for (int s = 0; s <= s_max; ++s)
            for (int k = 0; k <= k_max; ++k)
                fam.branches.push_back(CurveBranch{sign, s, k, {}});
    auto branch_index = [&](int sign, int s, int k) -> std::size_t {
        const std::size_t si = sign > 0 ? 0 : 1;
        return (si * static_cast<std::size_t>(s_max + 1) + static_cast<std::size_t>(s)) *
                   static_cast<std::size_t>(k_max + 1) +
               static_cast<std::size_t>(k);
    };

    for (const auto& [ya, yb] : fam.feasible) {
        std::size_t n = std::max<std::size_t>(samples_per_interval, 8);
        std::vector<double> ys;
        std::vector<double> phi;
        // refine the sampling until consecutive unwrapped angles stay close
        for (int attempt = 0; attempt < 5; ++attempt) {
            ys.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                ys[i] = ya + (yb - ya) * static_cast<double>(i) / static_cast<double>(n - 1);
            phi = unwrap_phi1(ctx, ys);
            double max_jump = 0.0;
            for (std::size_t i = 1; i < n; ++i)
                max_jump = std::max(max_jump, std::abs(phi[i] - phi[i - 1]));
            if (max_jump < std::numbers::pi / 2.0) break;
            n *= 2;
        }
        for (std::size_t i = 0; i < ys.size(); ++i) {
            for (int s = 0; s <= s_max; ++s) {
                for (int k = 0; k <= k_max; ++k) {
                    for (const auto& pt : curve_points(ctx, ys[i], s, k, phi[i], &fam.dropped))
                        fam.branches[branch_index(pt.sign, s, k)].points.push_back(pt);
                }
            }
        }
    }
    std::erase_if(fam.branches, [](const CurveBranch& b) { return b.points.empty(); });
    return fam;
}

}  // namespace tumor_dde
