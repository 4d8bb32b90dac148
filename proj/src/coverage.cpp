#include "hetnet/coverage.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hetnet/numerics.hpp"
#include "hetnet/pathloss.hpp"

namespace hetnet
{

namespace
{
constexpr QuadratureSpec kSpec{1e-9, 1e-14, 400};

void require_threshold(double tau)
{
    if (std::isnan(tau) || tau < 0.0)
    {
        throw std::domain_error("coverage: threshold must be >= 0");
    }
}

// Everything the per-tier coverage integrands need, computed once per call.
struct Setup
{
    SystemParams params;
    DerivedConstants derived;
    double a;
    double p_sub6;
    double p_mm;
    PathlossProcess mcell;
    PathlossProcess scell;

    Setup(Direction direction, const SystemParams& p)
        : params(p)
        , derived(derive(p))
        , a(association_weight(direction, derived))
        , p_sub6(sub6_tx_power(direction, p))
        , p_mm(mmwave_tx_power(direction, p))
        , mcell(Tier::Mcell, p)
        , scell(Tier::Scell, p)
    {
    }

    [[nodiscard]] std::vector<double> kinks() const
    {
        std::vector<double> out;
        for (double b : scell.breakpoints())
        {
            out.push_back(b / a);
        }
        return out;
    }
};

double mcell_term(const Setup& s, double tau)
{
    if (std::isinf(tau))
    {
        return 0.0;
    }
    const double noise = tau * s.derived.sigma2_m / (s.p_sub6 * s.derived.psi_m);
    const double interference = kPi * s.params.lambda_m * rho(tau, s.params.alpha_m);
    const double shape = 2.0 / s.params.alpha_m;
    return s.mcell.expect(
        [&](double l) {
            return std::exp(-noise * l - interference * std::pow(l, shape)) * s.scell.ccdf(s.a * l);
        },
        s.kinks(), kSpec);
}

double scell_term(const Setup& s, double tau, double noise_power_of_l = 1.0)
{
    if (std::isinf(tau))
    {
        return 0.0;
    }
    const double noise = tau * s.derived.sigma2_s / (s.p_mm * s.derived.psi_s);
    return s.scell.expect(
        [&](double l) {
            return std::exp(-noise * std::pow(l, noise_power_of_l)) * s.mcell.ccdf(l / s.a);
        },
        {}, kSpec);
}
}  // namespace

TierCoverage sinr_coverage(Direction direction, double tau, const SystemParams& params)
{
    require_threshold(tau);
    params.validate();
    const Setup s(direction, params);
    return {mcell_term(s, tau), scell_term(s, tau)};
}

double laplace_exponent_quadrature(double l, double tau, const SystemParams& params)
{
    require_threshold(tau);
    if (tau == 0.0)
    {
        return 0.0;
    }
    // t = l y^{-p}, p = alpha/(alpha-2), turns the algebraic tail into a finite range.
    const double alpha = params.alpha_m;
    const double p = alpha / (alpha - 2.0);
    const double j = integrate([&](double y) { return tau * p / (1.0 + tau * std::pow(y, p)); },
                               0.0, 1.0, {1e-12, 1e-16, 400});
    return 2.0 * kPi * params.lambda_m / alpha * std::pow(l, 2.0 / alpha) * j;
}

TierCoverage sinr_coverage_pc(double tau, double epsilon, const SystemParams& params)
{
    require_threshold(tau);
    params.validate();
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
    {
        throw std::domain_error("sinr_coverage_pc: epsilon must lie in [0, 1]");
    }
    const Setup s(Direction::UL, params);
    if (epsilon == 0.0)
    {
        return {mcell_term(s, tau), scell_term(s, tau)};
    }
    if (std::isinf(tau))
    {
        return {0.0, 0.0};
    }

    const double alpha = params.alpha_m;
    const double shape = 2.0 / alpha;
    const double noise_m = tau * s.derived.sigma2_m / (s.p_sub6 * s.derived.psi_m);
    const QuadratureSpec outer{1e-7, 1e-13, 400};
    const QuadratureSpec inner{1e-8, 1e-14, 400};

    // Each interferer transmits at P u^eps with u its own serving pathloss.
    auto mean_rho = [&](double l) {
        return s.mcell.expect(
            [&](double u) { return rho(tau * std::pow(u / l, epsilon), alpha); }, {}, inner);
    };
    const double p_m = s.mcell.expect(
        [&](double l) {
            const double exponent = noise_m * std::pow(l, 1.0 - epsilon)
                                    + kPi * params.lambda_m * std::pow(l, shape) * mean_rho(l);
            return std::exp(-exponent) * s.scell.ccdf(s.a * l);
        },
        s.kinks(), outer);
    return {p_m, scell_term(s, tau, 1.0 - epsilon)};
}

double mean_load(double assoc_prob, double tier_density, double lambda_u)
{
    if (!(assoc_prob >= 0.0 && assoc_prob <= 1.0))
    {
        throw std::domain_error("mean_load: association probability must lie in [0, 1]");
    }
    if (assoc_prob == 0.0 || lambda_u == 0.0)
    {
        return 1.0;
    }
    return 1.0 + 1.28 * lambda_u * assoc_prob / tier_density;
}

LoadModel load_model(Direction direction, const SystemParams& params)
{
    const AssocResult a = assoc_brp(direction, params);
    return {mean_load(a.p_mcell, params.lambda_m, params.lambda_u),
            mean_load(a.p_scell, params.lambda_s, params.lambda_u)};
}

TierCoverage rate_coverage(Direction direction, double rate, const SystemParams& params)
{
    return rate_coverage(direction, rate, params, load_model(direction, params));
}

TierCoverage rate_coverage(Direction direction, double rate, const SystemParams& params,
                           const LoadModel& loads)
{
    if (!(rate > 0.0))
    {
        throw std::domain_error("rate_coverage: rate must be > 0");
    }
    params.validate();
    const Setup s(direction, params);
    // 2^{rate N / W} - 1 without losing precision near zero.
    const double tau_m = std::expm1(rate * loads.n_bar_m * std::log(2.0) / params.w_m);
    const double tau_s = std::expm1(rate * loads.n_bar_s * std::log(2.0) / params.w_s);
    return {mcell_term(s, tau_m), scell_term(s, tau_s)};
}

double invert_coverage(const std::function<double(double)>& coverage, double p, double lo,
                       double hi, double rel_width)
{
    if (!(p > 0.0 && p < 1.0) || !(lo > 0.0 && hi > lo) || !(rel_width > 0.0))
    {
        throw std::invalid_argument("invert_coverage: need 0 < p < 1, 0 < lo < hi, rel_width > 0");
    }
    const double c_lo = coverage(lo);
    const double c_hi = coverage(hi);
    if (!(c_lo >= p && c_hi <= p))
    {
        std::ostringstream msg;
        msg << "coverage level " << p << " not bracketed: coverage ranges over [" << c_hi << ", "
            << c_lo << "] on [" << lo << ", " << hi << "]";
        throw std::domain_error(msg.str());
    }
    double log_lo = std::log(lo);
    double log_hi = std::log(hi);
    const double target = std::log1p(rel_width);
    while (log_hi - log_lo > target)
    {
        const double mid = 0.5 * (log_lo + log_hi);
        if (coverage(std::exp(mid)) >= p)
        {
            log_lo = mid;
        }
        else
        {
            log_hi = mid;
        }
    }
    return std::exp(0.5 * (log_lo + log_hi));
}

double percentile_rate(Direction direction, double p, const SystemParams& params)
{
    const LoadModel loads = load_model(direction, params);
    return invert_coverage(
        [&](double rate) { return rate_coverage(direction, rate, params, loads).total(); }, p, 1e3,
        1e11, 0.01);
}

double percentile_sinr(Direction direction, double p, const SystemParams& params)
{
    return invert_coverage([&](double tau) { return sinr_coverage(direction, tau, params).total(); },
                           p, 1e-6, 1e10, 1e-3);
}

}  // namespace hetnet
