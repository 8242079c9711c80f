#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tumor_dde/linear_stability.hpp"

namespace tumor_dde {

// Geometry of the imaginary-axis crossing equations at frequency y:
//   Q0(y) = lambda1*lambda2 - y^2,   Q1(y) = -(lambda1+lambda2)*y,
//   H(y)  = sqrt(Q0^2 + Q1^2),       phi1 continuous with
//   Q0 = H cos(phi1), Q1 = H sin(phi1).
struct CrossingGeometry {
    double q0, q1, hmag;
    double phi1;      // principal value; trace_curves unwraps along the grid
    double vartheta;  // in [0, pi]
    bool feasible;
};

CrossingGeometry crossing_geometry(const CharacteristicContext& ctx, double y);

// |H^2(y) + R^2 (p^2 - m^2)| - 2 R p H(y); crossing delays exist iff <= 0.
double feasibility_value(const CharacteristicContext& ctx, double y);

// Maximal subintervals of the scanned grid where the crossing inequality
// holds, endpoints refined by bisection to 1e-10.  Empty output means no
// imaginary-axis crossing exists on the scanned range.
std::vector<std::pair<double, double>> feasible_set(const CharacteristicContext& ctx,
                                                    const std::vector<double>& y_grid);

// Uniform positive grid covering every frequency that can possibly satisfy
// the crossing inequality for this context.
std::vector<double> default_y_grid(const CharacteristicContext& ctx, std::size_t n = 4096);

struct SwitchingCurvePoint {
    double y;
    double tau1, tau2;
    int sign;  // +1 or -1 branch of vartheta
    int s, k;
    double residual;  // |P(iy, tau1, tau2)|
};

// Up to two crossing points (the +/- branches) at frequency y for branch
// indices (s, k).  Branches that land at negative delays are dropped;
// `dropped` (when given) counts them.  phi1_unwrapped overrides the principal
// angle when tracing a continuous curve.
std::vector<SwitchingCurvePoint> curve_points(const CharacteristicContext& ctx, double y,
                                              int s, int k,
                                              std::optional<double> phi1_unwrapped = {},
                                              int* dropped = nullptr);

struct CurveBranch {
    int sign;
    int s, k;
    std::vector<SwitchingCurvePoint> points;  // ordered by y
};

struct CurveFamily {
    std::vector<std::pair<double, double>> feasible;
    std::vector<CurveBranch> branches;  // ordered by (sign, s, k)
    int dropped = 0;                    // negative-delay branch points
};

CurveFamily trace_curves(const CharacteristicContext& ctx, const std::vector<double>& y_grid,
                         std::size_t samples_per_interval = 2000, int s_max = 3, int k_max = 3);

}  // namespace tumor_dde
