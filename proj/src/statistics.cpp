#include "hetnet/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetnet
{

Estimate proportion_ci(std::size_t successes, std::size_t trials)
{
    if (trials == 0 || successes > trials)
    {
        throw std::invalid_argument("proportion_ci: need 0 <= successes <= trials, trials > 0");
    }
    constexpr double z95 = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double half = z95 * std::sqrt(p * (1.0 - p) / n);
    return {p, std::max(0.0, p - half), std::min(1.0, p + half)};
}

double quantile(std::vector<double> samples, double q)
{
    if (samples.empty() || !(q >= 0.0 && q <= 1.0))
    {
        throw std::invalid_argument("quantile: need samples and q in [0, 1]");
    }
    std::sort(samples.begin(), samples.end());
    const double pos = q * static_cast<double>(samples.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= samples.size())
    {
        return samples.back();
    }
    const double frac = pos - static_cast<double>(i);
    return samples[i] + frac * (samples[i + 1] - samples[i]);
}

double empirical_ccdf(const std::vector<double>& samples, double threshold)
{
    if (samples.empty())
    {
        throw std::invalid_argument("empirical_ccdf: no samples");
    }
    const auto above = std::count_if(samples.begin(), samples.end(),
                                     [threshold](double x) { return x > threshold; });
    return static_cast<double>(above) / static_cast<double>(samples.size());
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    if (samples.empty())
    {
        throw std::invalid_argument("ks_distance: no samples");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace hetnet
