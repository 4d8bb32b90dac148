#include "hetnet/numerics.hpp"

#include <sstream>

namespace hetnet
{

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0))
    {
        throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
    }
    if (!(abs_tol >= 0.0))
    {
        throw std::invalid_argument("QuadratureSpec: abs_tol must be >= 0");
    }
    if (max_subdivisions < 1)
    {
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    }
}

namespace detail
{
void throw_nonfinite(double x, double fx)
{
    std::ostringstream msg;
    msg << "integrand returned " << fx << " at x = " << x;
    throw EvaluationError(msg.str(), x);
}
}  // namespace detail

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double q_function_scaled(double x)
{
    constexpr double kSwitch = 5.0;
    if (x < kSwitch)
    {
        return std::exp(0.5 * x * x) * q_function(x);
    }
    // Mills ratio Q(x)/phi(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))), evaluated bottom-up.
    double tail = x;
    for (int k = 60; k >= 1; --k)
    {
        tail = x + k / tail;
    }
    const double inv_sqrt_2pi = 0.398942280401432677939946059934;
    return inv_sqrt_2pi / tail;
}

double rho(double t, double alpha)
{
    if (!(alpha > 2.0))
    {
        throw std::domain_error("rho: alpha must exceed 2 for the interference integral to converge");
    }
    if (std::isnan(t) || t < 0.0)
    {
        throw std::domain_error("rho: threshold must be >= 0");
    }
    if (t == 0.0)
    {
        return 0.0;
    }
    if (std::isinf(t))
    {
        return t;
    }

    const double k = 0.5 * alpha;
    const double q = k / (k - 1.0);
    const double lower = std::pow(t, -2.0 / alpha);
    const QuadratureSpec tight{1e-13, 1e-16, 400};

    // The tail [max(lower,1), inf) is mapped to a finite range by u = s^{-1/(k-1)}.
    auto tail_integrand = [q](double s) { return 1.0 / (1.0 + std::pow(s, q)); };
    double value = 0.0;
    if (lower >= 1.0)
    {
        value = integrate(tail_integrand, 0.0, std::pow(lower, 1.0 - k), tight) / (k - 1.0);
    }
    else
    {
        auto head_integrand = [k](double u) { return 1.0 / (1.0 + std::pow(u, k)); };
        value = integrate(head_integrand, lower, 1.0, tight)
                + integrate(tail_integrand, 0.0, 1.0, tight) / (k - 1.0);
    }
    return std::pow(t, 2.0 / alpha) * value;
}

}  // namespace hetnet
