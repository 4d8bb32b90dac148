#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hetnet
{

struct Estimate
{
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    [[nodiscard]] bool contains(double x) const { return x >= ci_low && x <= ci_high; }
    [[nodiscard]] double half_width() const { return 0.5 * (ci_high - ci_low); }
};

//! Normal-approximation 95% interval for a binomial proportion, clipped to [0, 1].
Estimate proportion_ci(std::size_t successes, std::size_t trials);

//! Linear-interpolation quantile (type 7); q in [0, 1]. Sorts a copy.
double quantile(std::vector<double> samples, double q);

//! Fraction of samples strictly above the threshold.
double empirical_ccdf(const std::vector<double>& samples, double threshold);

//! sup_x |F_n(x) - cdf(x)| over the sample.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace hetnet
