#include "hetnet/pathloss.hpp"

#include <limits>
#include <stdexcept>

namespace hetnet
{

const char* to_string(Tier tier)
{
    return tier == Tier::Mcell ? "mcell" : "scell";
}

PathlossProcess::PathlossProcess(Tier tier, const SystemParams& params)
{
    *this = tier == Tier::Mcell
                ? mcell(params.lambda_m, params.alpha_m)
                : scell(params.lambda_s, params.alpha_l, params.alpha_n, params.omega, params.mu);
}

PathlossProcess PathlossProcess::mcell(double density, double alpha)
{
    if (!(density >= 0.0) || !(alpha > 0.0))
    {
        throw std::invalid_argument("PathlossProcess: density must be >= 0 and alpha > 0");
    }
    PathlossProcess p;
    p.tier_ = Tier::Mcell;
    p.density_ = density;
    p.alpha_ = alpha;
    p.cache_support();
    return p;
}

PathlossProcess
PathlossProcess::scell(double density, double alpha_l, double alpha_n, double omega, double mu)
{
    if (!(density >= 0.0) || !(alpha_l > 0.0) || !(alpha_l <= alpha_n) || !(omega >= 0.0)
        || !(omega <= 1.0) || !(mu > 0.0))
    {
        throw std::invalid_argument("PathlossProcess: invalid Scell parameters");
    }
    PathlossProcess p;
    p.tier_ = Tier::Scell;
    p.density_ = density;
    p.alpha_l_ = alpha_l;
    p.alpha_n_ = alpha_n;
    p.omega_ = omega;
    p.mu_ = mu;
    p.cache_support();
    return p;
}

namespace
{
void require_nonnegative(double t)
{
    if (std::isnan(t) || t < 0.0)
    {
        throw std::domain_error("pathloss must be >= 0");
    }
}
}  // namespace

double PathlossProcess::intensity(double t) const
{
    require_nonnegative(t);
    if (t == 0.0)
    {
        return 0.0;
    }
    if (tier_ == Tier::Mcell)
    {
        return kPi * density_ * std::pow(t, 2.0 / alpha_);
    }
    const double b_l = std::pow(mu_, alpha_l_);
    const double b_n = std::pow(mu_, alpha_n_);
    const double nlos = std::pow(t, 2.0 / alpha_n_);
    double area = 0.0;
    if (t < b_l)
    {
        area = omega_ * std::pow(t, 2.0 / alpha_l_) + (1.0 - omega_) * nlos;
    }
    else if (t <= b_n)
    {
        area = omega_ * mu_ * mu_ + (1.0 - omega_) * nlos;
    }
    else
    {
        area = nlos;
    }
    return kPi * density_ * area;
}

double PathlossProcess::intensity_derivative(double t) const
{
    if (std::isnan(t) || t <= 0.0)
    {
        throw std::domain_error("pathloss density requires t > 0");
    }
    if (tier_ == Tier::Mcell)
    {
        return kPi * density_ * (2.0 / alpha_) * std::pow(t, 2.0 / alpha_ - 1.0);
    }
    const double nlos = (2.0 / alpha_n_) * std::pow(t, 2.0 / alpha_n_ - 1.0);
    double slope = 0.0;
    if (t < std::pow(mu_, alpha_l_))
    {
        slope = omega_ * (2.0 / alpha_l_) * std::pow(t, 2.0 / alpha_l_ - 1.0) + (1.0 - omega_) * nlos;
    }
    else if (t <= std::pow(mu_, alpha_n_))
    {
        slope = (1.0 - omega_) * nlos;
    }
    else
    {
        slope = nlos;
    }
    return kPi * density_ * slope;
}

double PathlossProcess::ccdf(double t) const
{
    return std::exp(-intensity(t));
}

double PathlossProcess::pdf(double t) const
{
    // Decaying exponent: f = -dF/dt = Lambda'(t) exp(-Lambda(t)).
    return intensity_derivative(t) * std::exp(-intensity(t));
}

void PathlossProcess::cache_support()
{
    if (density_ > 0.0)
    {
        support_lo_ = inverse_intensity(kLowMass);
        support_hi_ = inverse_intensity(kHighMass);
    }
}

std::vector<double> PathlossProcess::breakpoints() const
{
    if (tier_ == Tier::Mcell)
    {
        return {};
    }
    const double b_l = std::pow(mu_, alpha_l_);
    const double b_n = std::pow(mu_, alpha_n_);
    if (b_l == b_n)
    {
        return {b_l};
    }
    return {b_l, b_n};
}

double PathlossProcess::inverse_intensity(double target) const
{
    if (!(target >= 0.0) || density_ == 0.0)
    {
        throw std::domain_error("inverse_intensity: need target >= 0 and a nonempty tier");
    }
    if (target == 0.0)
    {
        return 0.0;
    }
    if (tier_ == Tier::Mcell)
    {
        return std::pow(target / (kPi * density_), alpha_ / 2.0);
    }
    const double b_n = std::pow(mu_, alpha_n_);
    const double area = target / (kPi * density_);
    if (area >= mu_ * mu_)
    {
        // Past the ball the whole disk is NLOS; intensity(b_n) = pi lambda mu^2.
        return std::pow(area, alpha_n_ / 2.0);
    }
    // Monotone on (0, b_n]: bisection on ln t.
    double lo = std::log(std::numeric_limits<double>::min());
    double hi = std::log(b_n);
    for (int i = 0; i < 80; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        if (intensity(std::exp(mid)) < target)
        {
            lo = mid;
        }
        else
        {
            hi = mid;
        }
    }
    return std::exp(hi);
}

}  // namespace hetnet
