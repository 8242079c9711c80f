#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "tumor_dde/equilibria.hpp"
#include "tumor_dde/linear_stability.hpp"
#include "tumor_dde/mat2.hpp"

// Test-only oracles, independent of the implementation paths they check.
namespace oracles {

// Dense-grid sign-change root counter for h_mu(T) = h0 on [0, b^(1/beta)].
// The power grid is precomputed once per (b, beta) so a 1e6-point scan per
// (mu, h0) sample stays cheap.
class HGridOracle {
  public:
    HGridOracle(double b, double beta, std::size_t n);
    int count_roots(double mu, double h0) const;
    // distance from h0 to the nearest sampled extremum value; tangency filter
    double tangency_margin(double mu, double h0) const;

  private:
    double b_;
    std::vector<double> t_;
    std::vector<double> tb_;  // t^beta
};

// Direct determinant evaluation det(lam I - A0 - z A1 - w A2).
std::complex<double> det_char(const tumor_dde::mat2& A0, const tumor_dde::mat2& A1,
                              const tumor_dde::mat2& A2, std::complex<double> lam,
                              std::complex<double> z, std::complex<double> w);

// Bisection root of G(y) on (0, hi); independent check of the y_hat radical.
double g_root_bisect(const tumor_dde::CharacteristicContext& ctx, double hi);

// Bit-level ulp distance between two doubles of the same sign.
std::uint64_t ulp_distance(double a, double b);

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace oracles
