#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "numerics.hpp"
#include "params.hpp"

namespace hetnet
{

enum class Tier
{
    Mcell,
    Scell,
};

const char* to_string(Tier tier);

//---------------------------------------------------------------------------//
/*!
 * Pathloss process of one tier, seen from the origin.
 *
 * Mcell: single-slope, Lambda(t) = pi lambda t^{2/alpha}.
 * Scell: LOS ball of radius mu; links inside are LOS with probability omega
 * (exponent alpha_l), everything else NLOS (alpha_n).
 */
class PathlossProcess
{
  public:
    PathlossProcess(Tier tier, const SystemParams& params);

    static PathlossProcess mcell(double density, double alpha);
    static PathlossProcess scell(double density, double alpha_l, double alpha_n, double omega, double mu);

    [[nodiscard]] Tier tier() const { return tier_; }
    [[nodiscard]] double density() const { return density_; }

    //! Mean number of BSs with pathloss in (0, t].
    [[nodiscard]] double intensity(double t) const;
    //! d/dt intensity(t), evaluated per branch.
    [[nodiscard]] double intensity_derivative(double t) const;
    //! P(min pathloss > t).
    [[nodiscard]] double ccdf(double t) const;
    //! Density of the minimum pathloss; requires t > 0.
    [[nodiscard]] double pdf(double t) const;
    //! Smallest t with intensity(t) >= target.
    [[nodiscard]] double inverse_intensity(double target) const;

    //! Kinks of the intensity: mu^{alpha_l}, mu^{alpha_n} (Scell only, deduplicated).
    [[nodiscard]] std::vector<double> breakpoints() const;

    /*!
     * E[g(L)] for L the minimum pathloss, i.e. int g(l) f(l) dl.
     *
     * Integrates over u = ln l so that the many decades covered by f are
     * handled uniformly. Ranges are split at the intensity breakpoints and at
     * any extra kinks of g. Mass outside Lambda in [1e-15, 60] is dropped
     * (below 1e-15 in probability).
     */
    template<class G>
    double expect(G&& g, const std::vector<double>& extra_breaks = {},
                  const QuadratureSpec& spec = {}) const;

  private:
    static constexpr double kLowMass = 1e-15;
    static constexpr double kHighMass = 60.0;

    PathlossProcess() = default;
    void cache_support();

    Tier tier_ = Tier::Mcell;
    double density_ = 0.0;
    double alpha_ = 0.0;    // Mcell exponent
    double alpha_l_ = 0.0;  // Scell LOS exponent
    double alpha_n_ = 0.0;  // Scell NLOS exponent
    double omega_ = 0.0;
    double mu_ = 0.0;
    double support_lo_ = 0.0;  // inverse_intensity(kLowMass)
    double support_hi_ = 0.0;  // inverse_intensity(kHighMass)
};

template<class G>
double PathlossProcess::expect(G&& g, const std::vector<double>& extra_breaks,
                               const QuadratureSpec& spec) const
{
    if (density_ == 0.0)
    {
        return 0.0;
    }
    const double lo = support_lo_;
    const double hi = support_hi_;

    std::vector<double> points{std::log(lo), std::log(hi)};
    auto add = [&](double b) {
        if (b > lo && b < hi)
        {
            points.push_back(std::log(b));
        }
    };
    for (double b : breakpoints())
    {
        add(b);
    }
    for (double b : extra_breaks)
    {
        add(b);
    }
    std::sort(points.begin(), points.end());

    auto integrand = [&](double u) {
        const double l = std::exp(u);
        const double w = pdf(l) * l;
        return w == 0.0 ? 0.0 : g(l) * w;
    };
    return integrate_pieces(integrand, points, spec);
}

}  // namespace hetnet
