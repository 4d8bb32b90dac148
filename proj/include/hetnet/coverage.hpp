#pragma once

#include <functional>

#include "association.hpp"
#include "params.hpp"

namespace hetnet
{

//! Coverage split by serving tier; total() is the unconditional probability.
struct TierCoverage
{
    double mcell = 0.0;
    double scell = 0.0;

    [[nodiscard]] double total() const { return mcell + scell; }
};

/*!
 * SINR coverage under Max-BRP association, Rayleigh fading.
 *
 * Mcell term: noise x interference Laplace transform x Fbar_s(a l), averaged
 * over f_m. The Laplace transform exp(-(2 pi lambda_m / alpha) int_l^inf
 * t^{2/alpha-1} / (1 + t/(tau l)) dt) equals exp(-pi lambda_m l^{2/alpha}
 * rho(tau, alpha)). The Scell term is noise-limited.
 */
TierCoverage sinr_coverage(Direction direction, double tau, const SystemParams& params);

//! Interference exponent of the Mcell Laplace transform, by direct quadrature.
double laplace_exponent_quadrature(double l, double tau, const SystemParams& params);

/*!
 * UL SINR coverage with fractional pathloss compensation.
 *
 * UEs transmit at P L^epsilon; interferer pathloss to its own BS is averaged
 * over f_m. Reduces to sinr_coverage(UL) at epsilon = 0.
 */
TierCoverage sinr_coverage_pc(double tau, double epsilon, const SystemParams& params);

//! Mean UEs sharing the serving cell, including the typical one.
double mean_load(double assoc_prob, double tier_density, double lambda_u);

struct LoadModel
{
    double n_bar_m = 1.0;
    double n_bar_s = 1.0;
};

//! Loads from Max-BRP association probabilities.
LoadModel load_model(Direction direction, const SystemParams& params);

//! Rate coverage P(R > rate) using the mean-load approximation.
TierCoverage rate_coverage(Direction direction, double rate, const SystemParams& params);

//! Same, with precomputed loads (used by sweeps and inversion).
TierCoverage rate_coverage(Direction direction, double rate, const SystemParams& params,
                           const LoadModel& loads);

/*!
 * Solve coverage(x) = p for a nonincreasing coverage, bisecting ln x on
 * [lo, hi] until hi/lo <= 1 + rel_width. Returns the geometric midpoint.
 *
 * Throws std::domain_error with the achievable range when p is not bracketed.
 */
double invert_coverage(const std::function<double(double)>& coverage, double p, double lo,
                       double hi, double rel_width);

//! Rate exceeded with probability p: percentile_rate(0.95) is the 5th-percentile rate.
double percentile_rate(Direction direction, double p, const SystemParams& params);

//! SINR threshold (linear) exceeded with probability p.
double percentile_sinr(Direction direction, double p, const SystemParams& params);

}  // namespace hetnet
